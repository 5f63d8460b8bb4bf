//! Inference networks: directed graphs of CF-weighted rules.
//!
//! A rule `IF E THEN H (cf)` links evidence to a hypothesis. Antecedents may
//! combine several propositions with AND/OR; a hypothesis may in turn serve
//! as evidence for another rule, giving a DAG of propositions. Propagation
//! walks the DAG in topological order: each rule contributes
//! `chain_sequential(rule.cf, antecedent_cf)` to its consequent and
//! contributions to the same hypothesis merge with `combine_parallel`.
//!
//! The lint in [`InferenceNetwork::find_divergent_links`] flags the topology
//! for which context-free rule strengths break down: one piece of evidence
//! bearing on two or more hypotheses. Once such a shared consequent also
//! receives evidence from elsewhere, belief in one consequent shifts belief
//! in the others, so no fixed per-rule CF can be right in every context.
//!
//! ```
//! use cfaudit::cf::CertaintyFactor;
//! use cfaudit::network::{Antecedent, InferenceNetwork, Rule};
//!
//! let net = InferenceNetwork::build(vec![
//!     Rule::new("r1", Antecedent::prop("a"), "g", CertaintyFactor::new(0.8).unwrap()).unwrap(),
//!     Rule::new("r2", Antecedent::prop("b"), "g", CertaintyFactor::new(0.5).unwrap()).unwrap(),
//! ]).unwrap();
//! let out = net.propagate(&[("a", 1.0), ("b", 1.0)].into_iter()
//!     .map(|(p, v)| (p.to_string(), CertaintyFactor::new(v).unwrap()))
//!     .collect()).unwrap();
//! assert!((out["g"].value() - 0.9).abs() < 1e-9);
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cf::{
    chain_sequential, combine_antecedent, combine_parallel, CertaintyFactor, CfError, Connective,
};

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("duplicate rule id '{0}'")]
    DuplicateRuleId(String),
    #[error("rule '{rule}' uses its consequent '{proposition}' in its own antecedent")]
    SelfReference { rule: String, proposition: String },
    #[error("cycle detected: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("unknown evidence proposition '{0}'")]
    UnknownEvidence(String),
    #[error("evidence supplied for '{0}', which is a derived hypothesis, not a leaf")]
    EvidenceOnHypothesis(String),
    #[error("contradictory categorical contributions to hypothesis '{0}'")]
    Contradiction(String),
    #[error("rule '{0}' has an empty antecedent")]
    EmptyAntecedent(String),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// An AND/OR expression tree over proposition names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Antecedent {
    Prop(String),
    And(Vec<Antecedent>),
    Or(Vec<Antecedent>),
}

impl Antecedent {
    pub fn prop(name: impl Into<String>) -> Self {
        Antecedent::Prop(name.into())
    }

    pub fn and(parts: Vec<Antecedent>) -> Self {
        Antecedent::And(parts)
    }

    pub fn or(parts: Vec<Antecedent>) -> Self {
        Antecedent::Or(parts)
    }

    /// All proposition names mentioned in the expression.
    pub fn propositions(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Antecedent::Prop(p) => {
                out.insert(p.as_str());
            }
            Antecedent::And(parts) | Antecedent::Or(parts) => {
                for part in parts {
                    part.collect(out);
                }
            }
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Antecedent::Prop(_) => false,
            Antecedent::And(parts) | Antecedent::Or(parts) => {
                parts.is_empty() || parts.iter().all(Antecedent::is_empty)
            }
        }
    }

    fn evaluate(
        &self,
        values: &BTreeMap<String, CertaintyFactor>,
    ) -> Result<CertaintyFactor, CfError> {
        match self {
            Antecedent::Prop(p) => Ok(values.get(p).copied().unwrap_or(CertaintyFactor::ZERO)),
            Antecedent::And(parts) => {
                let cfs = parts
                    .iter()
                    .map(|p| p.evaluate(values))
                    .collect::<Result<Vec<_>, _>>()?;
                combine_antecedent(Connective::And, &cfs)
            }
            Antecedent::Or(parts) => {
                let cfs = parts
                    .iter()
                    .map(|p| p.evaluate(values))
                    .collect::<Result<Vec<_>, _>>()?;
                combine_antecedent(Connective::Or, &cfs)
            }
        }
    }
}

impl fmt::Display for Antecedent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Antecedent::Prop(p) => write!(f, "{p}"),
            Antecedent::And(parts) => {
                let rendered: Vec<String> = parts
                    .iter()
                    .map(|p| match p {
                        Antecedent::Or(_) => format!("({p})"),
                        _ => p.to_string(),
                    })
                    .collect();
                write!(f, "{}", rendered.join(" AND "))
            }
            Antecedent::Or(parts) => {
                let rendered: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", rendered.join(" OR "))
            }
        }
    }
}

/// `IF <antecedent> THEN <consequent> (cf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub id: String,
    pub antecedent: Antecedent,
    pub consequent: String,
    pub cf: CertaintyFactor,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        antecedent: Antecedent,
        consequent: impl Into<String>,
        cf: CertaintyFactor,
    ) -> Result<Self, NetworkError> {
        let rule = Rule {
            id: id.into(),
            antecedent,
            consequent: consequent.into(),
            cf,
        };
        if rule.antecedent.is_empty() {
            return Err(NetworkError::EmptyAntecedent(rule.id));
        }
        if rule
            .antecedent
            .propositions()
            .contains(rule.consequent.as_str())
        {
            return Err(NetworkError::SelfReference {
                rule: rule.id,
                proposition: rule.consequent,
            });
        }
        Ok(rule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    DivergentLink,
    Cycle,
}

/// A lint result on network topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyFinding {
    pub kind: FindingKind,
    /// For divergent links: the evidence node first, then the consequents.
    pub subjects: Vec<String>,
    pub exempt: bool,
    pub message: String,
}

/// Convergent links (several evidence sources on one hypothesis) are legal
/// given conditional independence, so they are surfaced as information only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergentInfo {
    pub hypothesis: String,
    pub rule_ids: Vec<String>,
}

/// A validated, acyclic rule network.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceNetwork {
    rules: Vec<Rule>,
    propositions: BTreeSet<String>,
}

impl InferenceNetwork {
    pub fn build(rules: Vec<Rule>) -> Result<Self, NetworkError> {
        let mut ids = BTreeSet::new();
        for rule in &rules {
            if !ids.insert(rule.id.as_str()) {
                return Err(NetworkError::DuplicateRuleId(rule.id.clone()));
            }
            if rule.antecedent.is_empty() {
                return Err(NetworkError::EmptyAntecedent(rule.id.clone()));
            }
            if rule
                .antecedent
                .propositions()
                .contains(rule.consequent.as_str())
            {
                return Err(NetworkError::SelfReference {
                    rule: rule.id.clone(),
                    proposition: rule.consequent.clone(),
                });
            }
        }
        let mut propositions = BTreeSet::new();
        for rule in &rules {
            propositions.insert(rule.consequent.clone());
            for p in rule.antecedent.propositions() {
                propositions.insert(p.to_string());
            }
        }
        let net = InferenceNetwork {
            rules,
            propositions,
        };
        if let Some(cycle) = net.find_cycle() {
            return Err(NetworkError::Cycle(cycle));
        }
        Ok(net)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn propositions(&self) -> &BTreeSet<String> {
        &self.propositions
    }

    /// A proposition is a hypothesis if any rule points into it.
    pub fn is_hypothesis(&self, name: &str) -> bool {
        self.rules.iter().any(|r| r.consequent == name)
    }

    pub fn hypotheses(&self) -> BTreeSet<&str> {
        self.rules.iter().map(|r| r.consequent.as_str()).collect()
    }

    pub fn leaves(&self) -> BTreeSet<&str> {
        self.propositions
            .iter()
            .map(String::as_str)
            .filter(|p| !self.is_hypothesis(p))
            .collect()
    }

    fn edges(&self) -> Vec<(&str, &str)> {
        let mut edges = Vec::new();
        for rule in &self.rules {
            for p in rule.antecedent.propositions() {
                edges.push((p, rule.consequent.as_str()));
            }
        }
        edges
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
        for (from, to) in self.edges() {
            adjacency.entry(from).or_default().push(to);
        }
        let mut state: HashMap<&str, u8> = HashMap::new(); // 1 = visiting, 2 = done
        let mut stack: Vec<&str> = Vec::new();

        fn visit<'a>(
            node: &'a str,
            adjacency: &HashMap<&'a str, Vec<&'a str>>,
            state: &mut HashMap<&'a str, u8>,
            stack: &mut Vec<&'a str>,
        ) -> Option<Vec<String>> {
            state.insert(node, 1);
            stack.push(node);
            for &next in adjacency.get(node).into_iter().flatten() {
                match state.get(next) {
                    Some(1) => {
                        let start = stack.iter().position(|&n| n == next).unwrap();
                        let mut cycle: Vec<String> =
                            stack[start..].iter().map(|s| s.to_string()).collect();
                        cycle.push(next.to_string());
                        return Some(cycle);
                    }
                    Some(_) => {}
                    None => {
                        if let Some(c) = visit(next, adjacency, state, stack) {
                            return Some(c);
                        }
                    }
                }
            }
            stack.pop();
            state.insert(node, 2);
            None
        }

        for p in &self.propositions {
            if !state.contains_key(p.as_str()) {
                if let Some(c) = visit(p, &adjacency, &mut state, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Propositions in dependency order (leaves first).
    fn topological_order(&self) -> Vec<&str> {
        let mut indegree: BTreeMap<&str, usize> =
            self.propositions.iter().map(|p| (p.as_str(), 0)).collect();
        let mut adjacency: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (from, to) in self.edges() {
            if adjacency.entry(from).or_default().insert(to) {
                *indegree.get_mut(to).unwrap() += 1;
            }
        }
        let mut ready: Vec<&str> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&p, _)| p)
            .collect();
        let mut order = Vec::with_capacity(indegree.len());
        while let Some(p) = ready.pop() {
            order.push(p);
            for &next in adjacency.get(p).into_iter().flatten() {
                let d = indegree.get_mut(next).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(next);
                }
            }
        }
        debug_assert_eq!(order.len(), self.propositions.len());
        order
    }

    /// Propagates evidence CFs (on leaves) to every proposition.
    ///
    /// Evidence of `1` means observed true, `-1` observed false, values in
    /// between an uncertain observation. The result does not depend on the
    /// order of the rule sequence: contributions to a hypothesis are merged
    /// in rule-id order.
    pub fn propagate(
        &self,
        evidence: &BTreeMap<String, CertaintyFactor>,
    ) -> Result<BTreeMap<String, CertaintyFactor>, NetworkError> {
        for key in evidence.keys() {
            if !self.propositions.contains(key) {
                return Err(NetworkError::UnknownEvidence(key.clone()));
            }
            if self.is_hypothesis(key) {
                return Err(NetworkError::EvidenceOnHypothesis(key.clone()));
            }
        }
        let mut values: BTreeMap<String, CertaintyFactor> = self
            .propositions
            .iter()
            .map(|p| {
                (
                    p.clone(),
                    evidence.get(p).copied().unwrap_or(CertaintyFactor::ZERO),
                )
            })
            .collect();

        for prop in self.topological_order() {
            let mut incoming: Vec<&Rule> =
                self.rules.iter().filter(|r| r.consequent == prop).collect();
            if incoming.is_empty() {
                continue;
            }
            incoming.sort_by(|a, b| a.id.cmp(&b.id));
            let mut acc = CertaintyFactor::ZERO;
            for rule in incoming {
                let antecedent_cf = rule.antecedent.evaluate(&values)?;
                let contribution = chain_sequential(rule.cf, antecedent_cf);
                acc = combine_parallel(acc, contribution)
                    .map_err(|_| NetworkError::Contradiction(prop.to_string()))?;
            }
            values.insert(prop.to_string(), acc);
        }
        Ok(values)
    }

    /// One finding per proposition whose evidence feeds rules with two or
    /// more distinct consequents. A finding is exempt only when no other
    /// rules bear on any of those consequents.
    pub fn find_divergent_links(&self) -> Vec<TopologyFinding> {
        let mut findings = Vec::new();
        for prop in &self.propositions {
            let mut consequents = BTreeSet::new();
            for rule in &self.rules {
                if rule.antecedent.propositions().contains(prop.as_str()) {
                    consequents.insert(rule.consequent.as_str());
                }
            }
            if consequents.len() < 2 {
                continue;
            }
            let exempt = self.rules.iter().all(|rule| {
                !consequents.contains(rule.consequent.as_str())
                    || rule.antecedent.propositions().contains(prop.as_str())
            });
            let consequent_list = consequents.iter().copied().collect::<Vec<_>>().join(", ");
            let message = if exempt {
                format!(
                    "'{prop}' bears on multiple hypotheses ({consequent_list}); \
                     no other rules reach these hypotheses, so consistent propagation is still possible"
                )
            } else {
                format!(
                    "'{prop}' bears on multiple hypotheses ({consequent_list}) that also receive \
                     other evidence; once one of these hypotheses gains support, it becomes indirect \
                     evidence about the others, so fixed context-free rule strengths cannot propagate \
                     belief consistently here"
                )
            };
            let mut subjects = vec![prop.clone()];
            subjects.extend(consequents.iter().map(|c| c.to_string()));
            findings.push(TopologyFinding {
                kind: FindingKind::DivergentLink,
                subjects,
                exempt,
                message,
            });
        }
        findings
    }

    /// Hypotheses receiving more than one rule. Info only: propagation is
    /// sound there provided evidence is conditionally independent given the
    /// hypothesis and its negation, which the joint-model auditor can check.
    pub fn find_convergent_links(&self) -> Vec<ConvergentInfo> {
        let mut by_hypothesis: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for rule in &self.rules {
            by_hypothesis
                .entry(rule.consequent.as_str())
                .or_default()
                .push(rule.id.as_str());
        }
        by_hypothesis
            .into_iter()
            .filter(|(_, ids)| ids.len() > 1)
            .map(|(hypothesis, mut ids)| {
                ids.sort_unstable();
                ConvergentInfo {
                    hypothesis: hypothesis.to_string(),
                    rule_ids: ids.into_iter().map(str::to_string).collect(),
                }
            })
            .collect()
    }

    /// True iff there is a directed path from `from` to `to`.
    pub fn has_path(&self, from: &str, to: &str) -> bool {
        if from == to {
            return true;
        }
        let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
        for (a, b) in self.edges() {
            adjacency.entry(a).or_default().push(b);
        }
        let mut seen = BTreeSet::new();
        let mut frontier = vec![from];
        while let Some(node) = frontier.pop() {
            if !seen.insert(node) {
                continue;
            }
            for &next in adjacency.get(node).into_iter().flatten() {
                if next == to {
                    return true;
                }
                frontier.push(next);
            }
        }
        false
    }
}

/// Convenience fixture: the burglary story. An alarm supports both burglary
/// and earthquake, a phone call reports the alarm, and a radio newscast
/// independently supports the earthquake.
///
/// ```
/// use std::collections::BTreeMap;
/// use cfaudit::cf::CertaintyFactor;
/// use cfaudit::network::{holmes_rules, InferenceNetwork};
///
/// let net = InferenceNetwork::build(holmes_rules()).unwrap();
/// let mut evidence = BTreeMap::new();
/// evidence.insert("phone_call".to_string(), CertaintyFactor::ONE);
/// let beliefs = net.propagate(&evidence).unwrap();
/// // phone_call (1.0) -> alarm (0.8) -> burglary (0.8 * 0.7)
/// assert!((beliefs["burglary"].value() - 0.56).abs() < 1e-9);
/// ```
pub fn holmes_rules() -> Vec<Rule> {
    let cf = |v: f64| CertaintyFactor::new(v).unwrap();
    vec![
        Rule::new("r1", Antecedent::prop("alarm"), "burglary", cf(0.7)).unwrap(),
        Rule::new("r2", Antecedent::prop("alarm"), "earthquake", cf(0.3)).unwrap(),
        Rule::new("r3", Antecedent::prop("phone_call"), "alarm", cf(0.8)).unwrap(),
        Rule::new("r4", Antecedent::prop("radio"), "earthquake", cf(0.9)).unwrap(),
    ]
}
