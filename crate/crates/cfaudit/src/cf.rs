//! Certainty-factor arithmetic.
//!
//! A certainty factor is a number in `[-1, 1]` attached to a rule. It measures
//! the *change* in belief in the rule's consequent when the antecedent becomes
//! known; it is not an absolute degree of belief. Positive values increase
//! belief, negative values decrease it, and the extremes `1` and `-1` are
//! categorical confirmation and refutation.
//!
//! Any update measure satisfying the usual propagation desiderata must be a
//! monotone transformation of the likelihood ratio
//! `lambda = p(E | H) / p(E | ~H)`. The mapping used here is
//!
//! ```text
//! CF = (lambda - 1) / lambda   when lambda >= 1
//! CF = lambda - 1              when lambda <= 1
//! ```
//!
//! with `lambda = infinity` mapping to `1` and `lambda = 0` to `-1`. The
//! parallel-combination function below is the multiplicative image of this
//! mapping: combining the CFs of two ratios equals the CF of their product.
//!
//! ```
//! use cfaudit::cf::{cf_from_lambda, combine_parallel, LikelihoodRatio};
//!
//! let a = cf_from_lambda(LikelihoodRatio::finite(4.0).unwrap()).unwrap();
//! let b = cf_from_lambda(LikelihoodRatio::finite(0.5).unwrap()).unwrap();
//! let both = combine_parallel(a, b).unwrap();
//! let direct = cf_from_lambda(LikelihoodRatio::finite(2.0).unwrap()).unwrap();
//! assert!((both.value() - direct.value()).abs() < 1e-12);
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for desk-scale equality checks on CF values.
pub const CF_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum CfError {
    #[error("certainty factor {0} outside [-1, 1]")]
    OutOfRange(f64),
    #[error("likelihood ratio must be nonnegative, got {0}")]
    NegativeRatio(f64),
    #[error("evidence impossible under both H and ~H")]
    EvidenceImpossible,
    #[error("contradictory categorical evidence")]
    ContradictoryEvidence,
    #[error("antecedent combination over an empty sequence")]
    EmptyAntecedent,
}

/// A belief update in `[-1, 1]`. Construction enforces the range.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CertaintyFactor(f64);

impl CertaintyFactor {
    pub const ZERO: CertaintyFactor = CertaintyFactor(0.0);
    pub const ONE: CertaintyFactor = CertaintyFactor(1.0);
    pub const NEG_ONE: CertaintyFactor = CertaintyFactor(-1.0);

    pub fn new(value: f64) -> Result<Self, CfError> {
        if value.is_finite() && (-1.0..=1.0).contains(&value) {
            Ok(CertaintyFactor(value))
        } else {
            Err(CfError::OutOfRange(value))
        }
    }

    /// Clamps rounding excess just beyond the endpoints back into range.
    fn from_computation(value: f64) -> Self {
        CertaintyFactor(value.clamp(-1.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_categorical(self) -> bool {
        self.0 == 1.0 || self.0 == -1.0
    }
}

impl TryFrom<f64> for CertaintyFactor {
    type Error = CfError;
    fn try_from(value: f64) -> Result<Self, CfError> {
        CertaintyFactor::new(value)
    }
}

impl From<CertaintyFactor> for f64 {
    fn from(cf: CertaintyFactor) -> f64 {
        cf.0
    }
}

impl fmt::Display for CertaintyFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `p(E | H ∧ e) / p(E | ~H ∧ e)`.
///
/// Infinity is a distinct variant, not a float overflow: it arises when the
/// denominator is exactly zero while the numerator is positive. `Undefined`
/// is the 0/0 case, evidence impossible on both sides; it carries no belief
/// content and converting it to a CF is an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LikelihoodRatio {
    Finite(f64),
    Infinite,
    Undefined,
}

impl LikelihoodRatio {
    pub fn finite(value: f64) -> Result<Self, CfError> {
        if value.is_finite() && value >= 0.0 {
            Ok(LikelihoodRatio::Finite(value))
        } else {
            Err(CfError::NegativeRatio(value))
        }
    }

    /// Forms the ratio from the two conditional probabilities.
    pub fn from_probabilities(numerator: f64, denominator: f64) -> Self {
        if denominator > 0.0 {
            LikelihoodRatio::Finite(numerator / denominator)
        } else if numerator > 0.0 {
            LikelihoodRatio::Infinite
        } else {
            LikelihoodRatio::Undefined
        }
    }
}

impl fmt::Display for LikelihoodRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LikelihoodRatio::Finite(v) => write!(f, "{v}"),
            LikelihoodRatio::Infinite => write!(f, "inf"),
            LikelihoodRatio::Undefined => write!(f, "undefined"),
        }
    }
}

/// Maps a likelihood ratio to a certainty factor.
///
/// `(l - 1)/l` above one, `l - 1` below one; both branches agree at `l = 1`.
pub fn cf_from_lambda(l: LikelihoodRatio) -> Result<CertaintyFactor, CfError> {
    match l {
        LikelihoodRatio::Undefined => Err(CfError::EvidenceImpossible),
        LikelihoodRatio::Infinite => Ok(CertaintyFactor::ONE),
        LikelihoodRatio::Finite(v) if !v.is_finite() || v < 0.0 => Err(CfError::NegativeRatio(v)),
        LikelihoodRatio::Finite(v) if v >= 1.0 => {
            Ok(CertaintyFactor::from_computation((v - 1.0) / v))
        }
        LikelihoodRatio::Finite(v) => Ok(CertaintyFactor::from_computation(v - 1.0)),
    }
}

/// Exact inverse of [`cf_from_lambda`]: `1/(1-cf)` for nonnegative CFs,
/// `cf + 1` for nonpositive ones, with `cf = 1` mapping to infinity.
pub fn lambda_from_cf(cf: CertaintyFactor) -> LikelihoodRatio {
    let v = cf.value();
    if v == 1.0 {
        LikelihoodRatio::Infinite
    } else if v >= 0.0 {
        LikelihoodRatio::Finite(1.0 / (1.0 - v))
    } else {
        LikelihoodRatio::Finite(v + 1.0)
    }
}

/// Combines two CFs bearing independently on the same hypothesis.
///
/// Same-sign pairs reinforce, mixed signs use the min-denominator form. The
/// function is commutative and, on CFs arising as images of likelihood
/// ratios, multiplicative: `combine(F(l1), F(l2)) = F(l1 * l2)`.
pub fn combine_parallel(
    x: CertaintyFactor,
    y: CertaintyFactor,
) -> Result<CertaintyFactor, CfError> {
    let (a, b) = (x.value(), y.value());
    if (a == 1.0 && b == -1.0) || (a == -1.0 && b == 1.0) {
        return Err(CfError::ContradictoryEvidence);
    }
    let v = if a >= 0.0 && b >= 0.0 {
        a + b * (1.0 - a)
    } else if a <= 0.0 && b <= 0.0 {
        a + b * (1.0 + a)
    } else {
        (a + b) / (1.0 - a.abs().min(b.abs()))
    };
    Ok(CertaintyFactor::from_computation(v))
}

/// Chains a rule's CF behind the CF of its antecedent: `cf_rule * max(0, cf_ant)`.
/// Disbelieved antecedents contribute nothing; they do not fire the negation.
pub fn chain_sequential(
    cf_rule: CertaintyFactor,
    cf_antecedent: CertaintyFactor,
) -> CertaintyFactor {
    CertaintyFactor::from_computation(cf_rule.value() * cf_antecedent.value().max(0.0))
}

/// How antecedent parts are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connective {
    And,
    Or,
}

/// `min` over the parts for AND, `max` for OR.
pub fn combine_antecedent(
    kind: Connective,
    parts: &[CertaintyFactor],
) -> Result<CertaintyFactor, CfError> {
    let mut iter = parts.iter().copied();
    let first = iter.next().ok_or(CfError::EmptyAntecedent)?;
    Ok(iter.fold(first, |acc, cf| match kind {
        Connective::And => {
            if cf.value() < acc.value() {
                cf
            } else {
                acc
            }
        }
        Connective::Or => {
            if cf.value() > acc.value() {
                cf
            } else {
                acc
            }
        }
    }))
}
