//! Constructive side of the engine: equal-product families, index shifts,
//! weighted decompositions and exact two-index weight solving.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactExponent, Rational};
use crate::model::{Signature, StringProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("family query needs t >= 1, sum >= 1 and max index >= 1")]
    InvalidQuery,
    #[error("term index must be at least 1")]
    InvalidIndex,
    #[error("shifting a{i}*a{j} by {n} moves an index below 1")]
    InvalidShift { i: u64, j: u64, n: i64 },
    #[error("a{i}^w1 * a{j}^w2 = a{k}^t has no solution when i = j != k")]
    NoSolution { i: u64, j: u64, k: u64 },
}

/// All `t`-term products with subscript sum `sum` over indices `1..=max_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyQuery {
    pub t: u64,
    pub sum: u64,
    pub max_index: u64,
    /// Allow an index to appear more than once.
    pub repetition: bool,
}

impl FamilyQuery {
    pub fn new(t: u64, sum: u64, max_index: u64, repetition: bool) -> Result<Self, EngineError> {
        if t == 0 || sum == 0 || max_index == 0 {
            return Err(EngineError::InvalidQuery);
        }
        Ok(FamilyQuery { t, sum, max_index, repetition })
    }

    /// Cheap bounds check; an infeasible query enumerates to nothing.
    pub fn is_feasible(&self) -> bool {
        let (t, l) = (self.t as u128, self.max_index as u128);
        let s = self.sum as u128;
        if self.repetition {
            t <= s && s <= t * l
        } else {
            t <= l && t * (t + 1) / 2 <= s && s <= t * l - t * (t - 1) / 2
        }
    }
}

/// Every index multiset answering `q`, each ascending, listed in lexicographic order.
pub fn enumerate_family(q: &FamilyQuery) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if !q.is_feasible() {
        return out;
    }
    let mut current = Vec::with_capacity(q.t as usize);
    extend_family(q, 1, q.t, q.sum, &mut current, &mut out);
    out
}

/// Bounds on the sum of `m` further indices, all `>= lo` (strictly increasing
/// unless `repetition`) and `<= l`.
fn tail_bounds(m: u128, lo: u128, l: u128, repetition: bool) -> (u128, u128) {
    if m == 0 {
        return (0, 0);
    }
    if repetition {
        (m * lo, m * l)
    } else {
        (m * lo + m * (m - 1) / 2, m * l - m * (m - 1) / 2)
    }
}

fn extend_family(
    q: &FamilyQuery,
    lo: u64,
    remaining: u64,
    rest: u64,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if remaining == 0 {
        if rest == 0 {
            out.push(current.clone());
        }
        return;
    }
    let l = q.max_index as u128;
    let m = (remaining - 1) as u128;
    for v in lo..=q.max_index {
        let next_lo = if q.repetition { v } else { v + 1 };
        if !q.repetition && m > 0 && next_lo > q.max_index {
            break;
        }
        let Some(after) = (rest as u128).checked_sub(v as u128) else { break };
        let (min, max) = tail_bounds(m, next_lo as u128, l, q.repetition);
        if after < min {
            break;
        }
        if after > max {
            continue;
        }
        current.push(v);
        extend_family(q, next_lo, remaining - 1, after as u64, current, out);
        current.pop();
    }
}

/// `a_i * a_j = a_{i-n} * a_{j+n}`.
pub fn shift_identity(i: u64, j: u64, n: i64) -> Result<Identity, EngineError> {
    if i == 0 || j == 0 {
        return Err(EngineError::InvalidIndex);
    }
    let shifted = |x: u64, d: i128| -> Option<u64> {
        let v = x as i128 + d;
        (v >= 1).then(|| u64::try_from(v).ok()).flatten()
    };
    let (Some(i2), Some(j2)) = (shifted(i, -(n as i128)), shifted(j, n as i128)) else {
        return Err(EngineError::InvalidShift { i, j, n });
    };
    let product = |a: u64, b: u64| StringProduct::from_indices(&[a, b]).expect("indices >= 1");
    Ok(Identity::new(product(i, j), product(i2, j2)))
}

/// One `(b, t)` pair of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Part {
    pub index: u64,
    pub weight: u64,
}

/// `a_{b1}^{t1} * ... * a_{bn}^{tn}` with distinct ascending indices and
/// positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

impl Decomposition {
    pub fn to_product(&self) -> StringProduct {
        StringProduct::normalize(
            self.parts
                .iter()
                .map(|p| (p.index, ExactExponent::rational(Rational::from(p.weight)))),
        )
        .expect("decomposition indices are >= 1")
    }
}

/// Every way to write `sum = t1*b1 + ... + tn*bn` with exactly `n` distinct
/// indices `b` in `1..=max_index` and positive integer weights adding up to `t`.
/// Lexicographic in the `(index, weight)` sequence.
pub fn decompose(t: u64, sum: u64, n: u64, max_index: u64) -> Vec<Decomposition> {
    let mut out = Vec::new();
    if t == 0 || n == 0 || n > t || n > max_index {
        return out;
    }
    let mut current = Vec::with_capacity(n as usize);
    let search = DecomposeSearch { max_index: max_index as u128 };
    search.extend(0, t as u128, n as u128, sum as u128, &mut current, &mut out);
    out
}

struct DecomposeSearch {
    max_index: u128,
}

impl DecomposeSearch {
    /// Range of `sum w_i * b_i` over `m` distinct indices `> prev`, `<= l`,
    /// with positive weights totalling `w`. `None` if no such choice exists.
    fn bounds(&self, m: u128, w: u128, prev: u128) -> Option<(u128, u128)> {
        let l = self.max_index;
        if m == 0 {
            return (w == 0).then_some((0, 0));
        }
        if w < m || prev + m > l {
            return None;
        }
        let tri = m * (m - 1) / 2;
        // heaviest weight on the smallest (largest) index
        let min = w * (prev + 1) + tri;
        let max = w * l - tri;
        Some((min, max))
    }

    fn extend(
        &self,
        prev: u128,
        weight_left: u128,
        parts_left: u128,
        rest: u128,
        current: &mut Vec<Part>,
        out: &mut Vec<Decomposition>,
    ) {
        if parts_left == 0 {
            if weight_left == 0 && rest == 0 {
                out.push(Decomposition { parts: current.clone() });
            }
            return;
        }
        let tri = parts_left * (parts_left - 1) / 2;
        let mut b = prev + 1;
        while b <= self.max_index {
            // smallest possible total once b is the lowest remaining index
            if weight_left * b + tri > rest {
                break;
            }
            let max_w = weight_left - (parts_left - 1);
            for w in 1..=max_w {
                let Some(after) = rest.checked_sub(w * b) else { break };
                let Some((min, max)) = self.bounds(parts_left - 1, weight_left - w, b) else {
                    continue;
                };
                if after < min || after > max {
                    continue;
                }
                current.push(Part { index: b as u64, weight: w as u64 });
                self.extend(b, weight_left - w, parts_left - 1, after, current, out);
                current.pop();
            }
            b += 1;
        }
    }
}

/// Collapses `p` to a single power `a_k^T` when its subscript sum is an
/// integer multiple `k * T` of its total exponent.
pub fn collapse(p: &StringProduct) -> Option<(u64, ExactExponent)> {
    let Signature { total, weighted_sum } = p.signature();
    if total.is_zero() {
        return None;
    }
    // k must satisfy weighted_sum = k * total in both components
    let k = if !total.rat.is_zero() {
        weighted_sum.rat.checked_div(&total.rat).ok()?
    } else {
        weighted_sum.pi.checked_div(&total.pi).ok()?
    };
    if total.scale(&k) != weighted_sum {
        return None;
    }
    let k = k.to_u64().filter(|&k| k >= 1)?;
    Some((k, total))
}

/// Solves `w1 + w2 = t`, `w1*i + w2*j = t*k`, the weights making
/// `a_i^w1 * a_j^w2 = a_k^t`.
pub fn solve_rational_weights(
    i: u64,
    j: u64,
    k: u64,
    t: &Rational,
) -> Result<(Rational, Rational), EngineError> {
    if i == 0 || j == 0 || k == 0 {
        return Err(EngineError::InvalidIndex);
    }
    if i == j {
        return if k == i {
            Ok((t.clone(), Rational::zero()))
        } else {
            Err(EngineError::NoSolution { i, j, k })
        };
    }
    let (i, j, k) = (Rational::from(i), Rational::from(j), Rational::from(k));
    let denom = &i - &j;
    let w1 = (t * &(&k - &j)).checked_div(&denom).expect("i != j");
    let w2 = (t * &(&i - &k)).checked_div(&denom).expect("i != j");
    Ok((w1, w2))
}

/// A claimed equation between two string-products.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Identity {
    pub lhs: StringProduct,
    pub rhs: StringProduct,
}

impl Identity {
    pub fn new(lhs: StringProduct, rhs: StringProduct) -> Self {
        Identity { lhs, rhs }
    }

    /// Largest index on either side.
    pub fn max_index(&self) -> Option<u64> {
        self.lhs.max_index().max(self.rhs.max_index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    VerifiedSymbolic,
    Refuted { lhs: Signature, rhs: Signature },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::VerifiedSymbolic)
    }
}

pub fn verify_identity(id: &Identity) -> Verdict {
    let (lhs, rhs) = (id.lhs.signature(), id.rhs.signature());
    if lhs == rhs {
        Verdict::VerifiedSymbolic
    } else {
        Verdict::Refuted { lhs, rhs }
    }
}
