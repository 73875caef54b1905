//! String-products of geometric-sequence terms and their signatures.
//!
//! A string-product is a finite product `a_{b1}^{t1} * ... * a_{bn}^{tn}`.
//! With `a_n = a1 * r^(n-1)` it equals `a1^T * r^(S-T)` where `T = sum t_i`
//! and `S = sum t_i * b_i`, so the pair `(T, S)` decides equality for every
//! sequence with `a1 > 0`, `r > 0`, `r != 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactExponent, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("term index must be at least 1, got {0}")]
    InvalidIndex(i128),
    #[error("term index {index} exceeds the sequence length {max_index}")]
    IndexOutOfRange { index: u64, max_index: u64 },
    #[error("evaluation produced a non-finite value")]
    NonFinite,
    #[error("invalid sequence parameters: {0}")]
    InvalidSequence(&'static str),
}

/// A concrete geometric sequence `a1, a1*r, a1*r^2, ...` truncated at `max_index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceSpec {
    a1: f64,
    r: f64,
    max_index: u64,
}

impl SequenceSpec {
    /// Requires `a1 > 0`, `r > 0` and `max_index >= 1`. `r = 1` is accepted
    /// here (the degenerate probe needs it); see [`SequenceSpec::is_admissible`].
    pub fn new(a1: f64, r: f64, max_index: u64) -> Result<Self, ModelError> {
        if max_index == 0 {
            return Err(ModelError::InvalidSequence("max index must be at least 1"));
        }
        if !(a1.is_finite() && a1 > 0.0) {
            return Err(ModelError::InvalidSequence("a1 must be finite and positive"));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(ModelError::InvalidSequence("r must be finite and positive"));
        }
        Ok(SequenceSpec { a1, r, max_index })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    /// `r != 1`: the regime where distinct signatures give distinct values.
    pub fn is_admissible(&self) -> bool {
        self.r != 1.0
    }

    /// The n-th term `a1 * r^(n-1)`.
    pub fn term(&self, n: u64) -> f64 {
        self.a1 * self.r.powf((n - 1) as f64)
    }
}

/// One factor `a_index ^ exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub index: u64,
    #[serde(rename = "exp")]
    pub exponent: ExactExponent,
}

/// A normalized product of terms: strictly ascending indices, no zero exponents.
/// The empty product is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawProduct")]
pub struct StringProduct {
    factors: Vec<Factor>,
}

#[derive(Deserialize)]
struct RawProduct {
    factors: Vec<Factor>,
}

impl TryFrom<RawProduct> for StringProduct {
    type Error = ModelError;

    fn try_from(raw: RawProduct) -> Result<Self, Self::Error> {
        StringProduct::normalize(raw.factors.into_iter().map(|f| (f.index, f.exponent)))
    }
}

/// The invariant pair `(T, S)` of a string-product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Signature {
    /// `T`, the sum of exponents.
    pub total: ExactExponent,
    /// `S`, the sum of exponent times index.
    pub weighted_sum: ExactExponent,
}

impl Signature {
    pub fn new(total: ExactExponent, weighted_sum: ExactExponent) -> Self {
        Signature { total, weighted_sum }
    }
}

impl std::ops::Add<&Signature> for &Signature {
    type Output = Signature;
    fn add(self, rhs: &Signature) -> Signature {
        Signature {
            total: &self.total + &rhs.total,
            weighted_sum: &self.weighted_sum + &rhs.weighted_sum,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T={}, S={}", self.total, self.weighted_sum)
    }
}

impl StringProduct {
    /// The empty product.
    pub fn one() -> Self {
        StringProduct::default()
    }

    /// Merges repeated indices, drops zero exponents and sorts by index.
    pub fn normalize<I>(raw: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (u64, ExactExponent)>,
    {
        let mut merged: BTreeMap<u64, ExactExponent> = BTreeMap::new();
        for (index, exponent) in raw {
            if index == 0 {
                return Err(ModelError::InvalidIndex(0));
            }
            *merged.entry(index).or_default() += &exponent;
        }
        Ok(Self::from_sorted_map(merged))
    }

    fn from_sorted_map(merged: BTreeMap<u64, ExactExponent>) -> Self {
        let factors = merged
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(index, exponent)| Factor { index, exponent })
            .collect();
        StringProduct { factors }
    }

    /// Product of plain terms, each with exponent 1 (a "t-tuple").
    pub fn from_indices(indices: &[u64]) -> Result<Self, ModelError> {
        Self::normalize(indices.iter().map(|&i| (i, ExactExponent::one())))
    }

    /// A single factor `a_index ^ exponent`.
    pub fn power_of(index: u64, exponent: ExactExponent) -> Result<Self, ModelError> {
        Self::normalize([(index, exponent)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.factors.last().map(|f| f.index)
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for f in &self.factors {
            sig.total += &f.exponent;
            sig.weighted_sum += &f.exponent.scale(&Rational::from(f.index));
        }
        sig
    }

    /// Whether the two products agree on every admissible geometric sequence.
    pub fn equivalent(&self, other: &StringProduct) -> bool {
        self.signature() == other.signature()
    }

    pub fn product(&self, other: &StringProduct) -> StringProduct {
        let mut merged: BTreeMap<u64, ExactExponent> = BTreeMap::new();
        for f in self.factors.iter().chain(&other.factors) {
            *merged.entry(f.index).or_default() += &f.exponent;
        }
        Self::from_sorted_map(merged)
    }

    /// Raises the product to a rational power; `c = 0` gives the empty product.
    pub fn power(&self, c: &Rational) -> StringProduct {
        if c.is_zero() {
            return StringProduct::one();
        }
        let factors = self
            .factors
            .iter()
            .map(|f| Factor { index: f.index, exponent: f.exponent.scale(c) })
            .collect();
        StringProduct { factors }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> StringProduct {
        self.power(&-Rational::one())
    }

    /// Evaluates factor by factor, `prod (a1 * r^(b-1))^t`, without going
    /// through the signature.
    pub fn evaluate(&self, seq: &SequenceSpec) -> Result<f64, ModelError> {
        self.compile().evaluate(seq)
    }

    /// Floating-point exponents, converted once for repeated evaluation.
    pub fn compile(&self) -> CompiledProduct {
        CompiledProduct {
            factors: self.factors.iter().map(|f| (f.index, f.exponent.to_f64())).collect(),
        }
    }
}

/// A product with its exponents already converted to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledProduct {
    factors: Vec<(u64, f64)>,
}

impl CompiledProduct {
    pub fn evaluate(&self, seq: &SequenceSpec) -> Result<f64, ModelError> {
        let mut value = 1.0f64;
        for &(index, exponent) in &self.factors {
            if index > seq.max_index {
                return Err(ModelError::IndexOutOfRange { index, max_index: seq.max_index });
            }
            value *= seq.term(index).powf(exponent);
            if !value.is_finite() {
                return Err(ModelError::NonFinite);
            }
        }
        if value == 0.0 {
            // underflow is as uninformative as overflow for comparisons
            return Err(ModelError::NonFinite);
        }
        Ok(value)
    }
}
