//! Ground-truth probabilistic oracle: an explicit discrete joint distribution.
//!
//! Everything here works by enumeration over the full outcome space, which is
//! the point: probabilities, conditionals, likelihood ratios and contextual
//! certainty factors all come from one explicit model, so claims about
//! context-(in)dependence can be checked rather than assumed.
//!
//! ```
//! use cfaudit::joint::{Event, JointModel, Variable};
//!
//! let coin = JointModel::from_weights(
//!     vec![Variable::new("coin", ["heads", "tails"]).unwrap()],
//!     vec![0.5, 0.5],
//! ).unwrap();
//! let heads = Event::var_eq("coin", "heads");
//! assert_eq!(coin.probability(&heads).unwrap(), 0.5);
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cf::{cf_from_lambda, CertaintyFactor, CfError, LikelihoodRatio};

/// Weights must sum to one within this.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Largest enumerable outcome space.
pub const MAX_ASSIGNMENTS: usize = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum JointError {
    #[error("variable '{0}' declared twice")]
    DuplicateVariable(String),
    #[error("variable '{0}' has no outcomes")]
    NoOutcomes(String),
    #[error("outcome '{outcome}' declared twice for variable '{variable}'")]
    DuplicateOutcome { variable: String, outcome: String },
    #[error("weight vector has length {got}, expected {expected}")]
    WeightCount { got: usize, expected: usize },
    #[error("negative weight {0}")]
    NegativeWeight(f64),
    #[error("weights sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("outcome space of {0} assignments exceeds the enumeration limit")]
    TooLarge(usize),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("unknown outcome '{outcome}' for variable '{variable}'")]
    UnknownOutcome { variable: String, outcome: String },
    #[error("event constrains variable '{0}' to an empty outcome set")]
    EmptyOutcomeSet(String),
    #[error("conditioning on impossible event")]
    ImpossibleCondition,
    #[error("hypothesis side '{0}' has zero probability in this context")]
    EmptySide(String),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// A named variable with a finite, ordered outcome list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub outcomes: Vec<String>,
}

impl Variable {
    pub fn new<I, S>(name: impl Into<String>, outcomes: I) -> Result<Self, JointError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let name = name.into();
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.is_empty() {
            return Err(JointError::NoOutcomes(name));
        }
        let mut seen = BTreeSet::new();
        for o in &outcomes {
            if !seen.insert(o.as_str()) {
                return Err(JointError::DuplicateOutcome {
                    variable: name,
                    outcome: o.clone(),
                });
            }
        }
        Ok(Variable { name, outcomes })
    }
}

/// A measurable event: a boolean combination of outcome constraints.
///
/// `All` is the universal event (the empty context Ø). Conjunction, negation
/// and disjunction cover every event the urn and diagram fixtures need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Event {
    All,
    In {
        variable: String,
        outcomes: BTreeSet<String>,
    },
    Not(Box<Event>),
    And(Vec<Event>),
    Or(Vec<Event>),
}

impl Event {
    pub fn var_eq(variable: impl Into<String>, outcome: impl Into<String>) -> Event {
        Event::In {
            variable: variable.into(),
            outcomes: [outcome.into()].into(),
        }
    }

    pub fn var_in<I, S>(variable: impl Into<String>, outcomes: I) -> Event
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Event::In {
            variable: variable.into(),
            outcomes: outcomes.into_iter().map(Into::into).collect(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(event: Event) -> Event {
        Event::Not(Box::new(event))
    }

    pub fn and(parts: Vec<Event>) -> Event {
        Event::And(parts)
    }

    pub fn or(parts: Vec<Event>) -> Event {
        Event::Or(parts)
    }

    fn validate(&self, model: &JointModel) -> Result<(), JointError> {
        match self {
            Event::All => Ok(()),
            Event::In { variable, outcomes } => {
                let var = model.variable(variable)?;
                if outcomes.is_empty() {
                    return Err(JointError::EmptyOutcomeSet(variable.clone()));
                }
                for o in outcomes {
                    if !var.outcomes.contains(o) {
                        return Err(JointError::UnknownOutcome {
                            variable: variable.clone(),
                            outcome: o.clone(),
                        });
                    }
                }
                Ok(())
            }
            Event::Not(inner) => inner.validate(model),
            Event::And(parts) | Event::Or(parts) => {
                parts.iter().try_for_each(|p| p.validate(model))
            }
        }
    }

    fn satisfied_by(&self, model: &JointModel, assignment: &[usize]) -> bool {
        match self {
            Event::All => true,
            Event::In { variable, outcomes } => {
                let idx = model.variable_index(variable).expect("validated event");
                outcomes.contains(&model.variables[idx].outcomes[assignment[idx]])
            }
            Event::Not(inner) => !inner.satisfied_by(model, assignment),
            Event::And(parts) => parts.iter().all(|p| p.satisfied_by(model, assignment)),
            Event::Or(parts) => parts.iter().any(|p| p.satisfied_by(model, assignment)),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::All => write!(f, "Ø"),
            Event::In { variable, outcomes } => {
                if outcomes.len() == 1 {
                    write!(f, "{variable}={}", outcomes.iter().next().unwrap())
                } else {
                    let list: Vec<&str> = outcomes.iter().map(String::as_str).collect();
                    write!(f, "{variable}∈{{{}}}", list.join(","))
                }
            }
            Event::Not(inner) => write!(f, "~({inner})"),
            Event::And(parts) => {
                let list: Vec<String> = parts.iter().map(Event::to_string).collect();
                write!(f, "{}", list.join(" ∧ "))
            }
            Event::Or(parts) => {
                let list: Vec<String> = parts.iter().map(Event::to_string).collect();
                write!(f, "({})", list.join(" ∨ "))
            }
        }
    }
}

/// `CF(H, E, e)` together with the likelihood ratio it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualCf {
    pub hypothesis: String,
    pub evidence: String,
    pub context: String,
    pub lambda: LikelihoodRatio,
    pub cf: CertaintyFactor,
}

/// Outcome of a conditional-independence check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CiOutcome {
    /// Both conditionals match their context-free counterparts.
    Holds,
    /// At least one side moved; the deltas are `|p(t|h∧e) - p(t|h)|` and the
    /// `~h` twin.
    Fails {
        delta_given_h: f64,
        delta_given_not_h: f64,
    },
    /// Some conditional is undefined (zero-probability condition).
    Vacuous,
}

impl CiOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CiOutcome::Holds)
    }
}

/// An explicit joint distribution over finitely many discrete variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModel {
    variables: Vec<Variable>,
    /// Mixed-radix row-major: last variable varies fastest.
    weights: Vec<f64>,
}

impl JointModel {
    pub fn from_weights(variables: Vec<Variable>, weights: Vec<f64>) -> Result<Self, JointError> {
        let mut names = BTreeSet::new();
        for v in &variables {
            if !names.insert(v.name.as_str()) {
                return Err(JointError::DuplicateVariable(v.name.clone()));
            }
        }
        let expected: usize = variables.iter().try_fold(1usize, |acc, v| {
            acc.checked_mul(v.outcomes.len())
                .filter(|&n| n <= MAX_ASSIGNMENTS)
                .ok_or(JointError::TooLarge(usize::MAX))
        })?;
        if weights.len() != expected {
            return Err(JointError::WeightCount {
                got: weights.len(),
                expected,
            });
        }
        let mut total = 0.0;
        for &w in &weights {
            if w.is_nan() || w < 0.0 {
                return Err(JointError::NegativeWeight(w));
            }
            total += w;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(JointError::NotNormalized(total));
        }
        Ok(JointModel { variables, weights })
    }

    /// Builds the table by evaluating `weight` on every full assignment
    /// (outcome indices in variable order).
    pub fn from_fn(
        variables: Vec<Variable>,
        weight: impl Fn(&[usize]) -> f64,
    ) -> Result<Self, JointError> {
        let sizes: Vec<usize> = variables.iter().map(|v| v.outcomes.len()).collect();
        let total: usize = sizes.iter().product();
        let mut weights = Vec::with_capacity(total);
        let mut assignment = vec![0usize; sizes.len()];
        loop {
            weights.push(weight(&assignment));
            if !next_assignment(&mut assignment, &sizes) {
                break;
            }
        }
        JointModel::from_weights(variables, weights)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Result<&Variable, JointError> {
        self.variables
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| JointError::UnknownVariable(name.to_string()))
    }

    fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    fn assignments(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let sizes: Vec<usize> = self.variables.iter().map(|v| v.outcomes.len()).collect();
        let mut assignment = vec![0usize; sizes.len()];
        let mut i = 0usize;
        std::iter::from_fn(move || {
            if i >= self.weights.len() {
                return None;
            }
            let item = (assignment.clone(), self.weights[i]);
            next_assignment(&mut assignment, &sizes);
            i += 1;
            Some(item)
        })
    }

    /// Sum of weights over assignments satisfying the event.
    pub fn probability(&self, event: &Event) -> Result<f64, JointError> {
        event.validate(self)?;
        Ok(self
            .assignments()
            .filter(|(a, _)| event.satisfied_by(self, a))
            .map(|(_, w)| w)
            .sum())
    }

    /// `p(a | given)`; errors on a zero-probability condition.
    pub fn conditional(&self, a: &Event, given: &Event) -> Result<f64, JointError> {
        a.validate(self)?;
        let denominator = self.probability(given)?;
        if denominator <= 0.0 {
            return Err(JointError::ImpossibleCondition);
        }
        let joint = self.probability(&Event::and(vec![a.clone(), given.clone()]))?;
        Ok(joint / denominator)
    }

    /// `lambda(h, e_new, context) = p(e_new | h ∧ context) / p(e_new | ~h ∧ context)`.
    ///
    /// Both conditioning sides must be possible; a zero denominator with a
    /// positive numerator is infinity, and 0/0 is the undefined sentinel.
    pub fn likelihood_ratio(
        &self,
        h: &Event,
        e_new: &Event,
        context: &Event,
    ) -> Result<LikelihoodRatio, JointError> {
        h.validate(self)?;
        e_new.validate(self)?;
        context.validate(self)?;
        let h_side = Event::and(vec![h.clone(), context.clone()]);
        let not_h_side = Event::and(vec![Event::not(h.clone()), context.clone()]);
        if self.probability(&h_side)? <= 0.0 {
            return Err(JointError::EmptySide(format!("{h} ∧ {context}")));
        }
        if self.probability(&not_h_side)? <= 0.0 {
            return Err(JointError::EmptySide(format!("~({h}) ∧ {context}")));
        }
        let numerator = self.conditional(e_new, &h_side)?;
        let denominator = self.conditional(e_new, &not_h_side)?;
        Ok(LikelihoodRatio::from_probabilities(numerator, denominator))
    }

    /// Packages the ratio and its certainty factor. An undefined ratio (the
    /// evidence is impossible on both sides) propagates as an error.
    pub fn contextual_cf(
        &self,
        h: &Event,
        e_new: &Event,
        context: &Event,
    ) -> Result<ContextualCf, JointError> {
        let lambda = self.likelihood_ratio(h, e_new, context)?;
        let cf = cf_from_lambda(lambda)?;
        Ok(ContextualCf {
            hypothesis: h.to_string(),
            evidence: e_new.to_string(),
            context: context.to_string(),
            lambda,
            cf,
        })
    }

    /// Checks `p(target | h ∧ context) = p(target | h)` and the `~h` twin.
    pub fn ci_given(
        &self,
        h: &Event,
        target: &Event,
        context: &Event,
        tolerance: f64,
    ) -> Result<CiOutcome, JointError> {
        h.validate(self)?;
        target.validate(self)?;
        context.validate(self)?;
        let not_h = Event::not(h.clone());
        let h_ctx = Event::and(vec![h.clone(), context.clone()]);
        let not_h_ctx = Event::and(vec![not_h.clone(), context.clone()]);
        for side in [h, &not_h, &h_ctx, &not_h_ctx] {
            if self.probability(side)? <= 0.0 {
                return Ok(CiOutcome::Vacuous);
            }
        }
        let delta_given_h =
            (self.conditional(target, &h_ctx)? - self.conditional(target, h)?).abs();
        let delta_given_not_h =
            (self.conditional(target, &not_h_ctx)? - self.conditional(target, &not_h)?).abs();
        if delta_given_h <= tolerance && delta_given_not_h <= tolerance {
            Ok(CiOutcome::Holds)
        } else {
            Ok(CiOutcome::Fails {
                delta_given_h,
                delta_given_not_h,
            })
        }
    }

    /// True iff every assignment satisfying `a` satisfies `b`, weights ignored
    /// (a purely logical check over the outcome space).
    pub fn entails(&self, a: &Event, b: &Event) -> Result<bool, JointError> {
        a.validate(self)?;
        b.validate(self)?;
        Ok(self
            .assignments()
            .all(|(idx, _)| !a.satisfied_by(self, &idx) || b.satisfied_by(self, &idx)))
    }
}

/// Advances a mixed-radix counter; false once it wraps to all zeros.
fn next_assignment(assignment: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..assignment.len()).rev() {
        assignment[i] += 1;
        if assignment[i] < sizes[i] {
            return true;
        }
        assignment[i] = 0;
    }
    false
}
