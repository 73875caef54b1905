//! Numeric cross-checks of symbolic claims, and a literal brute-force
//! family enumerator used as a test reference.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::engine::Identity;
use crate::model::{ModelError, SequenceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force is limited to max index <= 15 and t <= 5 (got t={t}, max index={max_index})")]
    TooLarge { t: u64, max_index: u64 },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("degenerate probe needs equal total exponents on both sides")]
    UnequalTotals,
}

/// Sampling parameters for [`numeric_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub trials: u32,
    pub seed: u64,
    pub rel_tol: f64,
    pub a1_range: (f64, f64),
    pub r_range: (f64, f64),
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            trials: 1000,
            seed: 0,
            rel_tol: 1e-9,
            a1_range: (0.5, 2.0),
            r_range: (1.1, 3.0),
        }
    }
}

impl OracleConfig {
    pub fn new(trials: u32, seed: u64) -> Result<Self, OracleError> {
        let cfg = OracleConfig { trials, seed, ..OracleConfig::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.trials == 0 {
            return Err(OracleError::InvalidConfig("trials must be positive"));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol >= 0.0) {
            return Err(OracleError::InvalidConfig("rel_tol must be a non-negative number"));
        }
        let (a_lo, a_hi) = self.a1_range;
        if !(a_lo > 0.0 && a_lo <= a_hi && a_hi.is_finite()) {
            return Err(OracleError::InvalidConfig("a1 range must be positive"));
        }
        let (r_lo, r_hi) = self.r_range;
        if !(r_lo > 0.0 && r_lo <= r_hi && r_hi.is_finite()) || (r_lo..=r_hi).contains(&1.0) {
            return Err(OracleError::InvalidConfig("r range must be positive and exclude 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericVerdict {
    Pass,
    Fail,
    /// Too many samples (1% or more) could not be evaluated.
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericReport {
    pub verdict: NumericVerdict,
    pub trials: u32,
    pub max_rel_error: f64,
    pub skipped: u32,
    pub pass_count: u32,
}

/// `|x - y| / max(|x|, |y|)`, zero when both are zero.
pub fn relative_error(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Evaluates both sides of `id` on `cfg.trials` random sequences and compares
/// them at relative tolerance `cfg.rel_tol`.
pub fn numeric_check(id: &Identity, cfg: &OracleConfig) -> Result<NumericReport, OracleError> {
    cfg.validate()?;
    let max_index = id.max_index().unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = NumericReport {
        verdict: NumericVerdict::Pass,
        trials: cfg.trials,
        max_rel_error: 0.0,
        skipped: 0,
        pass_count: 0,
    };
    let (lhs_f, rhs_f) = (id.lhs.compile(), id.rhs.compile());
    for _ in 0..cfg.trials {
        let a1 = rng.gen_range(cfg.a1_range.0..=cfg.a1_range.1);
        let r = rng.gen_range(cfg.r_range.0..=cfg.r_range.1);
        let seq = SequenceSpec::new(a1, r, max_index).expect("validated ranges");
        let (lhs, rhs) = match (lhs_f.evaluate(&seq), rhs_f.evaluate(&seq)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(ModelError::NonFinite), _) | (_, Err(ModelError::NonFinite)) => {
                report.skipped += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => unreachable!("max index covers every factor: {e}"),
        };
        let err = relative_error(lhs, rhs);
        report.max_rel_error = report.max_rel_error.max(err);
        if err <= cfg.rel_tol {
            report.pass_count += 1;
        }
    }
    let evaluated = cfg.trials - report.skipped;
    report.verdict = if report.skipped as u64 * 100 >= cfg.trials as u64 {
        NumericVerdict::Unstable
    } else if report.pass_count == evaluated {
        NumericVerdict::Pass
    } else {
        NumericVerdict::Fail
    };
    Ok(report)
}

/// Materializes every size-`t` combination of `1..=max_index` and keeps those
/// summing to `sum`. Only for small inputs.
pub fn brute_force_family(
    t: u64,
    sum: u64,
    max_index: u64,
    repetition: bool,
) -> Result<Vec<Vec<u64>>, OracleError> {
    if t > 5 || max_index > 15 {
        return Err(OracleError::TooLarge { t, max_index });
    }
    let k = t as usize;
    let all: Vec<Vec<u64>> = if repetition {
        (1..=max_index).combinations_with_replacement(k).collect()
    } else {
        (1..=max_index).combinations(k).collect()
    };
    let mut hits: Vec<Vec<u64>> = all
        .into_iter()
        .filter(|c| !c.is_empty() && c.iter().sum::<u64>() == sum)
        .collect();
    hits.sort();
    Ok(hits)
}

/// Both sides evaluated at the degenerate ratio `r = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerateReport {
    pub a1: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// The two sides agree numerically at `r = 1`.
    pub coincide: bool,
    /// The identity holds symbolically.
    pub equivalent: bool,
    /// `r = 1` makes a false identity look true.
    pub masks_refutation: bool,
}

pub fn degenerate_probe(id: &Identity, a1: f64) -> Result<DegenerateReport, OracleError> {
    let (ls, rs) = (id.lhs.signature(), id.rhs.signature());
    if ls.total != rs.total {
        return Err(OracleError::UnequalTotals);
    }
    let seq = SequenceSpec::new(a1, 1.0, id.max_index().unwrap_or(1))
        .map_err(|_| OracleError::InvalidConfig("a1 must be finite and positive"))?;
    // at r = 1 every term is a1, so overflow here is the caller's a1^T problem
    let eval = |p: &crate::model::StringProduct| p.evaluate(&seq).unwrap_or(f64::NAN);
    let (lhs, rhs) = (eval(&id.lhs), eval(&id.rhs));
    let coincide = relative_error(lhs, rhs) <= 1e-12;
    let equivalent = ls == rs;
    Ok(DegenerateReport {
        a1,
        lhs,
        rhs,
        coincide,
        equivalent,
        masks_refutation: coincide && !equivalent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_identity;

    fn id(s: &str) -> Identity {
        parse_identity(s).unwrap()
    }

    #[test]
    fn pi_identity_passes() {
        let rep = numeric_check(
            &id("a3^(6pi) * a6^6 = a2^(5pi+2) * a8^(pi+4)"),
            &OracleConfig::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, NumericVerdict::Pass);
        assert_eq!(rep.pass_count, 1000);
        assert!(rep.max_rel_error <= 1e-9);
    }

    #[test]
    fn false_identity_fails_every_trial() {
        let rep = numeric_check(&id("a3*a4 = a5*a1"), &OracleConfig::new(200, 7).unwrap()).unwrap();
        assert_eq!(rep.verdict, NumericVerdict::Fail);
        assert_eq!(rep.pass_count, 0);
        // ratio is r >= 1.1, so relative error is at least 1 - 1/1.1
        assert!(rep.max_rel_error >= 1.0 - 1.0 / 1.1);
    }

    #[test]
    fn empty_identity() {
        let rep = numeric_check(&id("1 = 1"), &OracleConfig::default()).unwrap();
        assert_eq!(rep.verdict, NumericVerdict::Pass);
        assert_eq!(rep.max_rel_error, 0.0);
    }

    #[test]
    fn same_seed_same_report() {
        let i = id("a5 * a2^(1/2) = a4^(3/2)");
        let cfg = OracleConfig::new(300, 42).unwrap();
        assert_eq!(numeric_check(&i, &cfg).unwrap(), numeric_check(&i, &cfg).unwrap());
    }

    #[test]
    fn overflow_is_unstable() {
        let rep = numeric_check(&id("a900^2 = a899*a901"), &OracleConfig::new(100, 1).unwrap()).unwrap();
        assert_eq!(rep.verdict, NumericVerdict::Unstable);
        assert!(rep.skipped > 0);
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(0, 1).is_err());
        let cfg = OracleConfig { r_range: (0.5, 1.5), ..OracleConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = OracleConfig { a1_range: (-1.0, 1.0), ..OracleConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = OracleConfig { r_range: (0.2, 0.9), ..OracleConfig::default() };
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn report_json_shape() {
        let rep = numeric_check(&id("a4*a3 = a6*a1"), &OracleConfig::new(10, 3).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["trials"], 10);
        assert_eq!(v["skipped"], 0);
        assert!(v["max_rel_error"].is_f64());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_family(2, 7, 6, false).unwrap(),
            vec![vec![1, 6], vec![2, 5], vec![3, 4]]
        );
        assert_eq!(brute_force_family(3, 12, 8, false).unwrap().len(), 6);
        assert_eq!(brute_force_family(3, 12, 8, true).unwrap().len(), 10);
        assert!(brute_force_family(2, 1, 6, false).unwrap().is_empty());
        assert!(brute_force_family(6, 20, 10, false).is_err());
        assert!(brute_force_family(2, 20, 16, false).is_err());
    }

    #[test]
    fn degenerate_examples() {
        let rep = degenerate_probe(&id("a3*a4 = a5*a1"), 2.0).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (4.0, 4.0));
        assert!(rep.coincide && !rep.equivalent && rep.masks_refutation);

        let rep = degenerate_probe(&id("a4*a3 = a6*a1"), 1.5).unwrap();
        assert!(rep.coincide && rep.equivalent && !rep.masks_refutation);

        let rep = degenerate_probe(&id("a5 = a2"), 1.0).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (1.0, 1.0));

        assert_eq!(degenerate_probe(&id("a5 = a2*a3"), 1.0), Err(OracleError::UnequalTotals));
    }
}
