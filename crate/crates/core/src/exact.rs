//! Exact arithmetic: reduced rationals and exponents of the form `q + p*pi`.
//!
//! Every symbolic decision in the crate bottoms out in an equality test on
//! these types, so both are kept in a canonical form where structural
//! equality and value equality coincide.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
}

/// The four field operations on [`Rational`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Arbitrary-precision fraction, always reduced with a positive denominator.
///
/// `num_rational::BigRational` already maintains that invariant for every
/// value built through its public constructors, so this is a thin newtype
/// that adds a checked division and the crate's text form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Builds `numer/denom`, reducing on construction.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ArithError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Applies one of the four field operations; only division can fail.
    pub fn apply(&self, op: ArithOp, rhs: &Rational) -> Result<Rational, ArithError> {
        Ok(match op {
            ArithOp::Add => self + rhs,
            ArithOp::Sub => self - rhs,
            ArithOp::Mul => self * rhs,
            ArithOp::Div => return self.checked_div(rhs),
        })
    }

    /// Nearest `f64`. Huge magnitudes saturate to infinity.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// The value as a `u64` when it is a non-negative integer that fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.numer().to_u64()
        } else {
            None
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    /// Accepts `p` or `p/q` with an optional leading `-` on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || ArithError::Malformed(s.to_string());
        let digits = |t: &str, signed: bool| -> Result<BigInt, ArithError> {
            let body = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            t.parse::<BigInt>().map_err(|_| malformed())
        };
        match s.split_once('/') {
            None => Ok(Rational::from_integer(digits(s, true)?)),
            Some((n, d)) => Rational::new(digits(n, true)?, digits(d, false)?),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exponent `rat + pi * π` with rational coefficients.
///
/// Equality is componentwise. Since π is transcendental, that is exactly
/// value equality over ℚ + ℚπ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ExactExponent {
    pub rat: Rational,
    pub pi: Rational,
}

impl ExactExponent {
    pub fn new(rat: Rational, pi: Rational) -> Self {
        ExactExponent { rat, pi }
    }

    pub fn zero() -> Self {
        ExactExponent::default()
    }

    pub fn one() -> Self {
        ExactExponent::rational(Rational::one())
    }

    pub fn rational(rat: Rational) -> Self {
        ExactExponent { rat, pi: Rational::zero() }
    }

    pub fn integer(n: i64) -> Self {
        ExactExponent::rational(Rational::from(n))
    }

    /// `p * π`.
    pub fn pi_multiple(p: Rational) -> Self {
        ExactExponent { rat: Rational::zero(), pi: p }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.pi.is_zero()
    }

    /// True when there is no π component.
    pub fn is_rational(&self) -> bool {
        self.pi.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExactExponent { rat: &self.rat * c, pi: &self.pi * c }
    }

    pub fn to_f64(&self) -> f64 {
        if self.pi.is_zero() {
            self.rat.to_f64()
        } else {
            self.rat.to_f64() + self.pi.to_f64() * std::f64::consts::PI
        }
    }

    /// LaTeX rendering used inside superscripts.
    pub fn to_latex(&self) -> String {
        let pi_term = |p: &Rational| -> String {
            if *p == Rational::one() {
                "\\pi".to_string()
            } else if *p == -Rational::one() {
                "-\\pi".to_string()
            } else if p.is_integer() {
                format!("{p}\\pi")
            } else {
                format!("({p})\\pi")
            }
        };
        match (self.rat.is_zero(), self.pi.is_zero()) {
            (_, true) => self.rat.to_string(),
            (true, false) => pi_term(&self.pi),
            (false, false) => {
                let p = pi_term(&self.pi);
                if p.starts_with('-') {
                    format!("{}{}", self.rat, p)
                } else {
                    format!("{}+{}", self.rat, p)
                }
            }
        }
    }
}

impl From<Rational> for ExactExponent {
    fn from(rat: Rational) -> Self {
        ExactExponent::rational(rat)
    }
}

impl Add<&ExactExponent> for &ExactExponent {
    type Output = ExactExponent;
    fn add(self, rhs: &ExactExponent) -> ExactExponent {
        ExactExponent { rat: &self.rat + &rhs.rat, pi: &self.pi + &rhs.pi }
    }
}

impl Add for ExactExponent {
    type Output = ExactExponent;
    fn add(self, rhs: ExactExponent) -> ExactExponent {
        &self + &rhs
    }
}

impl Sub<&ExactExponent> for &ExactExponent {
    type Output = ExactExponent;
    fn sub(self, rhs: &ExactExponent) -> ExactExponent {
        ExactExponent { rat: &self.rat - &rhs.rat, pi: &self.pi - &rhs.pi }
    }
}

impl Sub for ExactExponent {
    type Output = ExactExponent;
    fn sub(self, rhs: ExactExponent) -> ExactExponent {
        &self - &rhs
    }
}

impl Neg for &ExactExponent {
    type Output = ExactExponent;
    fn neg(self) -> ExactExponent {
        ExactExponent { rat: -&self.rat, pi: -&self.pi }
    }
}

impl AddAssign<&ExactExponent> for ExactExponent {
    fn add_assign(&mut self, rhs: &ExactExponent) {
        self.rat += &rhs.rat;
        self.pi += &rhs.pi;
    }
}

impl std::iter::Sum for ExactExponent {
    fn sum<I: Iterator<Item = ExactExponent>>(iter: I) -> Self {
        iter.fold(ExactExponent::zero(), |mut acc, e| {
            acc += &e;
            acc
        })
    }
}

impl fmt::Display for ExactExponent {
    /// Canonical form: `q`, `p*pi` or `q+p*pi` (`q-p*pi` for negative `p`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.pi.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}*pi", self.pi),
            (false, false) if self.pi.is_negative() => {
                write!(f, "{}-{}*pi", self.rat, self.pi.abs())
            }
            (false, false) => write!(f, "{}+{}*pi", self.rat, self.pi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(q(1, 2).apply(ArithOp::Add, &q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(3, 2).apply(ArithOp::Sub, &Rational::one()).unwrap(), q(1, 2));
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(2, 4).denom(), &BigInt::from(2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(0, -7).to_string(), "0");
        assert_eq!(q(0, -7).denom(), &BigInt::from(1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            q(1, 2).apply(ArithOp::Div, &Rational::zero()),
            Err(ArithError::DivisionByZero)
        );
        assert_eq!(Rational::new(1, 0), Err(ArithError::DivisionByZero));
        assert_eq!("3/0".parse::<Rational>(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "7", "-7", "3/2", "-1/2", "12345678901234567890123456789/1000"] {
            assert_eq!(s.parse::<Rational>().unwrap().to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        for bad in ["", "-", "1/", "/2", "1/-2", "+3", "1.5", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn exponent_examples() {
        let six_pi = ExactExponent::pi_multiple(Rational::from(6));
        let six = ExactExponent::integer(6);
        let expected = ExactExponent::new(Rational::from(6), Rational::from(6));
        assert_eq!(&six_pi + &six, expected);

        let five_pi_two = ExactExponent::new(Rational::from(2), Rational::from(5));
        let pi_four = ExactExponent::new(Rational::from(4), Rational::from(1));
        assert_eq!(&five_pi_two + &pi_four, expected);

        assert!(ExactExponent::one().scale(&Rational::zero()).is_zero());
    }

    #[test]
    fn exponent_to_real() {
        assert_eq!(ExactExponent::zero().to_f64(), 0.0);
        assert_eq!(ExactExponent::integer(6).to_f64(), 6.0);
        assert_eq!(ExactExponent::pi_multiple(Rational::one()).to_f64(), std::f64::consts::PI);
    }

    #[test]
    fn exponent_text_forms() {
        let e = |r: Rational, p: Rational| ExactExponent::new(r, p).to_string();
        assert_eq!(e(Rational::zero(), Rational::zero()), "0");
        assert_eq!(e(q(3, 2), Rational::zero()), "3/2");
        assert_eq!(e(Rational::zero(), Rational::from(6)), "6*pi");
        assert_eq!(e(Rational::from(2), Rational::from(5)), "2+5*pi");
        assert_eq!(e(Rational::from(2), q(-1, 2)), "2-1/2*pi");
        assert_eq!(e(Rational::zero(), -Rational::one()), "-1*pi");
    }

    #[test]
    fn exponent_latex_forms() {
        let e = |r: Rational, p: Rational| ExactExponent::new(r, p).to_latex();
        assert_eq!(e(q(3, 2), Rational::zero()), "3/2");
        assert_eq!(e(Rational::zero(), Rational::from(6)), "6\\pi");
        assert_eq!(e(Rational::from(4), Rational::one()), "4+\\pi");
        assert_eq!(e(Rational::from(4), -Rational::one()), "4-\\pi");
        assert_eq!(e(Rational::zero(), q(1, 2)), "(1/2)\\pi");
    }

    #[test]
    fn serde_as_strings() {
        let e = ExactExponent::new(Rational::from(6), Rational::one());
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"rat":"6","pi":"1"}"#);
        let back: ExactExponent = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }
}
