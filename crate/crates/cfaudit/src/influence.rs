//! Influence diagrams: a DAG of propositions plus one conditional
//! probability table per node.
//!
//! Arcs mean probabilistic conditioning; a *missing* arc is a statement of
//! conditional independence, which [`InfluenceDiagram::check_missing_arc_ci`]
//! verifies against the induced joint. Inference is exact, by enumeration of
//! the factored product.
//!
//! Edits carry the weaker modularity contract this representation earns:
//! adding or deleting a proposition marks exactly the nodes whose incoming
//! arcs changed as stale, and carries every other table over untouched.
//! A diagram with stale nodes refuses inference until the missing tables are
//! reassessed with [`InfluenceDiagram::set_cpt`].
//!
//! ```
//! use cfaudit::influence::three_urn_diagram;
//! use cfaudit::joint::Event;
//!
//! let d = three_urn_diagram();
//! let p = d.infer(&Event::var_eq("Identity", "H3"), &Event::var_eq("Color", "White")).unwrap();
//! assert_eq!(p, 0.0); // a white ball rules out the all-black urn
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::joint::{Event, JointError, JointModel, Variable};

/// CPT rows must sum to one within this.
pub const ROW_TOLERANCE: f64 = 1e-9;

/// Tolerance for the missing-arc independence check.
pub const CI_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DiagramError {
    #[error("node '{0}' already exists")]
    NameCollision(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("node '{0}' needs at least two outcomes")]
    TooFewOutcomes(String),
    #[error("outcome '{outcome}' declared twice for node '{node}'")]
    DuplicateOutcome { node: String, outcome: String },
    #[error("arc {0} -> {1} would create a cycle")]
    CycleIntroduced(String, String),
    #[error("diagram incomplete: stale nodes {0:?} await reassessment")]
    Incomplete(Vec<String>),
    #[error("diagram invalid: {0}")]
    Invalid(String),
    #[error(
        "CPT for '{node}' does not match incoming arcs: expected parents {expected:?}, got {got:?}"
    )]
    ParentMismatch {
        node: String,
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("invalid CPT for '{node}': {reason}")]
    InvalidCpt { node: String, reason: String },
    #[error("'{0}' and '{1}' are directly linked; not a missing-arc pair")]
    NotMissingArc(String, String),
    #[error("noisy-or parameter for '{cause}' is {value}, outside [0, 1]")]
    BadNoisyOrParameter { cause: String, value: f64 },
    #[error("noisy-or requires a binary node, '{0}' is not")]
    NotBinary(String),
    #[error("noisy-or cause '{0}' has no parameter")]
    MissingNoisyOrParameter(String),
    #[error(transparent)]
    Joint(#[from] JointError),
}

/// A proposition with its finite outcome space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramNode {
    pub name: String,
    pub outcomes: Vec<String>,
}

impl DiagramNode {
    pub fn new<I, S>(name: impl Into<String>, outcomes: I) -> Result<Self, DiagramError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let name = name.into();
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.len() < 2 {
            return Err(DiagramError::TooFewOutcomes(name));
        }
        let mut seen = BTreeSet::new();
        for o in &outcomes {
            if !seen.insert(o.as_str()) {
                return Err(DiagramError::DuplicateOutcome {
                    node: name,
                    outcome: o.clone(),
                });
            }
        }
        Ok(DiagramNode { name, outcomes })
    }

    /// Binary convention used by the fixtures: first outcome is "present".
    pub fn binary(name: impl Into<String>) -> Self {
        DiagramNode::new(name, ["true", "false"]).unwrap()
    }
}

/// A conditional probability table: one probability vector over the node's
/// outcomes per full parent-outcome combination. Parents are kept in
/// canonical (lexicographic) order and row keys follow that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cpt {
    pub node: String,
    pub parents: Vec<String>,
    pub rows: BTreeMap<Vec<String>, Vec<f64>>,
}

impl Cpt {
    /// A table for a parentless node: one row holding the marginal.
    pub fn marginal(node: impl Into<String>, distribution: Vec<f64>) -> Self {
        Cpt {
            node: node.into(),
            parents: Vec::new(),
            rows: [(Vec::new(), distribution)].into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationKind {
    Cycle,
    MissingCpt,
    MissingRow,
    UnexpectedRow,
    NotNormalized,
    EntryOutOfRange,
    WrongRowLength,
    ParentMismatch,
    Stale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationFinding {
    pub kind: ValidationKind,
    pub node: Option<String>,
    pub message: String,
}

/// What an edit touched and what it provably left alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaleReport {
    pub edited: String,
    pub stale_nodes: BTreeSet<String>,
    pub untouched_nodes: BTreeSet<String>,
}

/// Controls how the leak parameter of a noisy-OR table is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeakMode {
    /// Leak is `p(~node | no active causes)`; rows with active causes use
    /// the plain product of their inhibition parameters.
    BaselineOnly,
    /// Leak multiplies into every row.
    Every,
}

/// The two-level structure: proposition DAG plus per-node tables.
///
/// Diagrams are immutable values; every edit returns a new diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceDiagram {
    nodes: BTreeMap<String, DiagramNode>,
    arcs: BTreeSet<(String, String)>,
    cpts: BTreeMap<String, Arc<Cpt>>,
    stale: BTreeSet<String>,
}

impl InfluenceDiagram {
    /// Assembles a diagram. Arcs must reference declared nodes and stay
    /// acyclic; CPT problems are left to [`InfluenceDiagram::validate`],
    /// except that supplied CPTs must at least name the right parents.
    /// Nodes without a CPT start stale.
    pub fn new(
        nodes: Vec<DiagramNode>,
        arcs: Vec<(String, String)>,
        cpts: Vec<Cpt>,
    ) -> Result<Self, DiagramError> {
        let mut node_map = BTreeMap::new();
        for node in nodes {
            if node_map.contains_key(&node.name) {
                return Err(DiagramError::NameCollision(node.name));
            }
            node_map.insert(node.name.clone(), node);
        }
        let mut arc_set = BTreeSet::new();
        for (parent, child) in arcs {
            for end in [&parent, &child] {
                if !node_map.contains_key(end) {
                    return Err(DiagramError::UnknownNode(end.clone()));
                }
            }
            arc_set.insert((parent, child));
        }
        if has_cycle(&node_map, &arc_set) {
            let (p, c) = arc_set.iter().next().unwrap().clone();
            return Err(DiagramError::CycleIntroduced(p, c));
        }
        let mut diagram = InfluenceDiagram {
            stale: node_map.keys().cloned().collect(),
            nodes: node_map,
            arcs: arc_set,
            cpts: BTreeMap::new(),
        };
        for cpt in cpts {
            diagram = diagram.set_cpt(cpt)?;
        }
        Ok(diagram)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &DiagramNode> {
        self.nodes.values()
    }

    pub fn node(&self, name: &str) -> Result<&DiagramNode, DiagramError> {
        self.nodes
            .get(name)
            .ok_or_else(|| DiagramError::UnknownNode(name.to_string()))
    }

    pub fn arcs(&self) -> impl Iterator<Item = &(String, String)> {
        self.arcs.iter()
    }

    pub fn cpt(&self, node: &str) -> Option<&Arc<Cpt>> {
        self.cpts.get(node)
    }

    pub fn stale(&self) -> &BTreeSet<String> {
        &self.stale
    }

    pub fn is_complete(&self) -> bool {
        self.stale.is_empty()
    }

    /// Incoming arcs in canonical order.
    pub fn parents(&self, node: &str) -> Vec<String> {
        self.arcs
            .iter()
            .filter(|(_, child)| child == node)
            .map(|(parent, _)| parent.clone())
            .collect()
    }

    pub fn children(&self, node: &str) -> Vec<String> {
        let mut out: Vec<String> = self
            .arcs
            .iter()
            .filter(|(parent, _)| parent == node)
            .map(|(_, child)| child.clone())
            .collect();
        out.sort();
        out
    }

    /// Reports structural and table defects as findings, not exceptions.
    pub fn validate(&self) -> Vec<ValidationFinding> {
        let mut findings = Vec::new();
        if has_cycle(&self.nodes, &self.arcs) {
            findings.push(ValidationFinding {
                kind: ValidationKind::Cycle,
                node: None,
                message: "arcs contain a directed cycle".to_string(),
            });
        }
        for name in self.nodes.keys() {
            if self.stale.contains(name) {
                findings.push(ValidationFinding {
                    kind: ValidationKind::Stale,
                    node: Some(name.clone()),
                    message: format!("'{name}' awaits probability reassessment"),
                });
                continue;
            }
            let Some(cpt) = self.cpts.get(name) else {
                findings.push(ValidationFinding {
                    kind: ValidationKind::MissingCpt,
                    node: Some(name.clone()),
                    message: format!("'{name}' has no probability table"),
                });
                continue;
            };
            findings.extend(self.validate_cpt_rows(name, cpt));
        }
        findings
    }

    fn validate_cpt_rows(&self, name: &str, cpt: &Cpt) -> Vec<ValidationFinding> {
        let mut findings = Vec::new();
        let parents = self.parents(name);
        if cpt.parents != parents {
            findings.push(ValidationFinding {
                kind: ValidationKind::ParentMismatch,
                node: Some(name.to_string()),
                message: format!(
                    "table for '{name}' lists parents {:?} but incoming arcs give {parents:?}",
                    cpt.parents
                ),
            });
            return findings;
        }
        let node = &self.nodes[name];
        let expected = parent_combinations(&parents, &self.nodes);
        for combo in &expected {
            match cpt.rows.get(combo) {
                None => findings.push(ValidationFinding {
                    kind: ValidationKind::MissingRow,
                    node: Some(name.to_string()),
                    message: format!("missing parent configuration {combo:?} for '{name}'"),
                }),
                Some(row) => {
                    if row.len() != node.outcomes.len() {
                        findings.push(ValidationFinding {
                            kind: ValidationKind::WrongRowLength,
                            node: Some(name.to_string()),
                            message: format!(
                                "row {combo:?} of '{name}' has {} entries, expected {}",
                                row.len(),
                                node.outcomes.len()
                            ),
                        });
                        continue;
                    }
                    if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                        findings.push(ValidationFinding {
                            kind: ValidationKind::EntryOutOfRange,
                            node: Some(name.to_string()),
                            message: format!(
                                "row {combo:?} of '{name}' has entries outside [0, 1]"
                            ),
                        });
                    }
                    let total: f64 = row.iter().sum();
                    if (total - 1.0).abs() > ROW_TOLERANCE {
                        findings.push(ValidationFinding {
                            kind: ValidationKind::NotNormalized,
                            node: Some(name.to_string()),
                            message: format!(
                                "row {combo:?} of '{name}' sums to {total}, expected 1"
                            ),
                        });
                    }
                }
            }
        }
        for combo in cpt.rows.keys() {
            if !expected.contains(combo) {
                findings.push(ValidationFinding {
                    kind: ValidationKind::UnexpectedRow,
                    node: Some(name.to_string()),
                    message: format!("row {combo:?} of '{name}' matches no parent configuration"),
                });
            }
        }
        findings
    }

    /// Multiplies the tables out into an explicit joint distribution.
    pub fn to_joint(&self) -> Result<JointModel, DiagramError> {
        if !self.stale.is_empty() {
            return Err(DiagramError::Incomplete(
                self.stale.iter().cloned().collect(),
            ));
        }
        let problems = self.validate();
        if let Some(first) = problems.first() {
            return Err(DiagramError::Invalid(first.message.clone()));
        }
        let names: Vec<&String> = self.nodes.keys().collect();
        let variables: Vec<Variable> = names
            .iter()
            .map(|name| Variable::new((*name).clone(), self.nodes[*name].outcomes.clone()))
            .collect::<Result<_, _>>()?;
        let index_of: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), i))
            .collect();

        // Pre-resolve each node's parent variable indices once.
        let mut lookups = Vec::new();
        for name in &names {
            let parents = self.parents(name);
            let parent_indices: Vec<usize> = parents.iter().map(|p| index_of[p.as_str()]).collect();
            let parent_nodes: Vec<&DiagramNode> = parents.iter().map(|p| &self.nodes[p]).collect();
            lookups.push((
                index_of[name.as_str()],
                Arc::clone(&self.cpts[name.as_str()]),
                parent_indices,
                parent_nodes,
            ));
        }

        let model = JointModel::from_fn(variables, |assignment| {
            let mut weight = 1.0;
            for (own_index, cpt, parent_indices, parent_nodes) in &lookups {
                let combo: Vec<String> = parent_indices
                    .iter()
                    .zip(parent_nodes)
                    .map(|(&pi, pnode)| pnode.outcomes[assignment[pi]].clone())
                    .collect();
                let row = &cpt.rows[&combo];
                weight *= row[assignment[*own_index]];
            }
            weight
        })?;
        Ok(model)
    }

    /// `p(query | given)` by enumeration of the factored joint.
    pub fn infer(&self, query: &Event, given: &Event) -> Result<f64, DiagramError> {
        Ok(self.to_joint()?.conditional(query, given)?)
    }

    /// Verifies the independence a missing arc asserts: for every outcome
    /// pair of `a` and `b`, `p(a, b | mediators) = p(a | mediators) * p(b | mediators)`.
    pub fn check_missing_arc_ci(
        &self,
        a: &str,
        b: &str,
        mediators: &Event,
    ) -> Result<bool, DiagramError> {
        let node_a = self.node(a)?.clone();
        let node_b = self.node(b)?.clone();
        let direct = (a.to_string(), b.to_string());
        let reverse = (b.to_string(), a.to_string());
        if self.arcs.contains(&direct) || self.arcs.contains(&reverse) {
            return Err(DiagramError::NotMissingArc(a.to_string(), b.to_string()));
        }
        let joint = self.to_joint()?;
        for oa in &node_a.outcomes {
            for ob in &node_b.outcomes {
                let ea = Event::var_eq(a, oa.clone());
                let eb = Event::var_eq(b, ob.clone());
                let pab =
                    joint.conditional(&Event::and(vec![ea.clone(), eb.clone()]), mediators)?;
                let pa = joint.conditional(&ea, mediators)?;
                let pb = joint.conditional(&eb, mediators)?;
                if (pab - pa * pb).abs() > CI_TOLERANCE {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Adds a proposition, together with any new arcs. Exactly the nodes
    /// whose incoming arcs change become stale; every other table is carried
    /// over as the same object.
    ///
    /// ```
    /// use cfaudit::influence::{holmes_diagram, DiagramNode};
    ///
    /// let diagram = holmes_diagram();
    /// let (edited, report) = diagram
    ///     .add_node(
    ///         DiagramNode::binary("AprilFools"),
    ///         &[("AprilFools".to_string(), "PhoneCall".to_string())],
    ///     )
    ///     .unwrap();
    /// // Only the new node and the child that gained a parent need reassessment.
    /// assert_eq!(
    ///     report.stale_nodes.iter().collect::<Vec<_>>(),
    ///     ["AprilFools", "PhoneCall"]
    /// );
    /// assert!(edited.cpt("Burglary").is_some());
    /// ```
    pub fn add_node(
        &self,
        node: DiagramNode,
        new_arcs: &[(String, String)],
    ) -> Result<(Self, StaleReport), DiagramError> {
        if self.nodes.contains_key(&node.name) {
            return Err(DiagramError::NameCollision(node.name));
        }
        let mut next = self.clone();
        let name = node.name.clone();
        next.nodes.insert(name.clone(), node);
        for (parent, child) in new_arcs {
            for end in [parent, child] {
                if !next.nodes.contains_key(end) {
                    return Err(DiagramError::UnknownNode(end.clone()));
                }
            }
            next.arcs.insert((parent.clone(), child.clone()));
        }
        if has_cycle(&next.nodes, &next.arcs) {
            let (p, c) = new_arcs.first().cloned().unwrap_or_default();
            return Err(DiagramError::CycleIntroduced(p, c));
        }
        let mut stale: BTreeSet<String> = [name.clone()].into();
        for (_, child) in new_arcs {
            stale.insert(child.clone());
        }
        for touched in &stale {
            next.cpts.remove(touched);
            next.stale.insert(touched.clone());
        }
        let report = StaleReport {
            edited: format!("add-node {name}"),
            untouched_nodes: next
                .nodes
                .keys()
                .filter(|n| !stale.contains(*n))
                .cloned()
                .collect(),
            stale_nodes: stale,
        };
        Ok((next, report))
    }

    /// Deletes a proposition and its incident arcs. Its former children lose
    /// a parent and become stale; everything else is untouched.
    pub fn delete_node(&self, name: &str) -> Result<(Self, StaleReport), DiagramError> {
        if !self.nodes.contains_key(name) {
            return Err(DiagramError::UnknownNode(name.to_string()));
        }
        let mut next = self.clone();
        next.nodes.remove(name);
        next.cpts.remove(name);
        next.stale.remove(name);
        let stale: BTreeSet<String> = self.children(name).into_iter().collect();
        next.arcs
            .retain(|(parent, child)| parent != name && child != name);
        for touched in &stale {
            next.cpts.remove(touched);
            next.stale.insert(touched.clone());
        }
        let report = StaleReport {
            edited: format!("delete-node {name}"),
            untouched_nodes: next
                .nodes
                .keys()
                .filter(|n| !stale.contains(*n))
                .cloned()
                .collect(),
            stale_nodes: stale,
        };
        Ok((next, report))
    }

    /// Installs a reassessed table, clearing the node's stale mark. The
    /// table must match the node's current incoming arcs and be complete and
    /// normalized.
    pub fn set_cpt(&self, cpt: Cpt) -> Result<Self, DiagramError> {
        let name = cpt.node.clone();
        self.node(&name)?;
        let expected = self.parents(&name);
        if cpt.parents != expected {
            return Err(DiagramError::ParentMismatch {
                node: name,
                expected,
                got: cpt.parents,
            });
        }
        let mut trial = self.clone();
        trial.cpts.insert(name.clone(), Arc::new(cpt));
        trial.stale.remove(&name);
        let problems = trial.validate_cpt_rows(&name, &trial.cpts[&name]);
        if let Some(first) = problems.first() {
            return Err(DiagramError::InvalidCpt {
                node: name,
                reason: first.message.clone(),
            });
        }
        Ok(trial)
    }
}

/// Builds a binary node's table from per-cause inhibition probabilities.
///
/// `q[cause]` is `p(~node | only that cause active)` and `leak` is
/// `p(~node | no cause active)`. For a set `S` of active causes the table
/// assigns `p(~node | S) = ∏_{i∈S} q_i` (times leak in [`LeakMode::Every`]).
/// Cause nodes are taken to be binary with their first outcome meaning
/// "active", matching [`DiagramNode::binary`].
pub fn noisy_or_cpt(
    node: &DiagramNode,
    causes: &[DiagramNode],
    q: &BTreeMap<String, f64>,
    leak: f64,
    mode: LeakMode,
) -> Result<Cpt, DiagramError> {
    if node.outcomes.len() != 2 {
        return Err(DiagramError::NotBinary(node.name.clone()));
    }
    for cause in causes {
        if cause.outcomes.len() != 2 {
            return Err(DiagramError::NotBinary(cause.name.clone()));
        }
        let value = *q
            .get(&cause.name)
            .ok_or_else(|| DiagramError::MissingNoisyOrParameter(cause.name.clone()))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(DiagramError::BadNoisyOrParameter {
                cause: cause.name.clone(),
                value,
            });
        }
    }
    if !(0.0..=1.0).contains(&leak) {
        return Err(DiagramError::BadNoisyOrParameter {
            cause: "leak".to_string(),
            value: leak,
        });
    }

    let mut ordered: Vec<&DiagramNode> = causes.iter().collect();
    ordered.sort_by(|a, b| a.name.cmp(&b.name));
    let parents: Vec<String> = ordered.iter().map(|c| c.name.clone()).collect();

    let mut rows = BTreeMap::new();
    for mask in 0..(1usize << ordered.len()) {
        let mut combo = Vec::with_capacity(ordered.len());
        let mut inhibition = 1.0;
        let mut any_active = false;
        for (bit, cause) in ordered.iter().enumerate() {
            let active = (mask >> bit) & 1 == 1;
            combo.push(cause.outcomes[if active { 0 } else { 1 }].clone());
            if active {
                any_active = true;
                inhibition *= q[&cause.name];
            }
        }
        let p_not = match mode {
            LeakMode::BaselineOnly => {
                if any_active {
                    inhibition
                } else {
                    leak
                }
            }
            LeakMode::Every => leak * inhibition,
        };
        rows.insert(combo, vec![1.0 - p_not, p_not]);
    }
    Ok(Cpt {
        node: node.name.clone(),
        parents,
        rows,
    })
}

fn parent_combinations(
    parents: &[String],
    nodes: &BTreeMap<String, DiagramNode>,
) -> Vec<Vec<String>> {
    let mut combos = vec![Vec::new()];
    for parent in parents {
        let outcomes = &nodes[parent].outcomes;
        combos = combos
            .into_iter()
            .flat_map(|combo| {
                outcomes.iter().map(move |o| {
                    let mut extended = combo.clone();
                    extended.push(o.clone());
                    extended
                })
            })
            .collect();
    }
    combos
}

fn has_cycle(nodes: &BTreeMap<String, DiagramNode>, arcs: &BTreeSet<(String, String)>) -> bool {
    let mut indegree: BTreeMap<&str, usize> = nodes.keys().map(|n| (n.as_str(), 0)).collect();
    for (_, child) in arcs {
        *indegree.get_mut(child.as_str()).unwrap() += 1;
    }
    let mut ready: Vec<&str> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&n, _)| n)
        .collect();
    let mut removed = 0usize;
    while let Some(node) = ready.pop() {
        removed += 1;
        for (parent, child) in arcs {
            if parent == node {
                let d = indegree.get_mut(child.as_str()).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(child.as_str());
                }
            }
        }
    }
    removed != nodes.len()
}

/// The urn problem as a two-node diagram: a uniform prior over three urns
/// and a color table conditioned on the urn's identity.
pub fn three_urn_diagram() -> InfluenceDiagram {
    let identity = DiagramNode::new("Identity", ["H1", "H2", "H3"]).unwrap();
    let color = DiagramNode::new("Color", ["White", "Black"]).unwrap();
    let third = 1.0 / 3.0;
    InfluenceDiagram::new(
        vec![identity, color],
        vec![("Identity".into(), "Color".into())],
        vec![
            Cpt::marginal("Identity", vec![third, third, third]),
            Cpt {
                node: "Color".into(),
                parents: vec!["Identity".into()],
                rows: [
                    (vec!["H1".to_string()], vec![0.5, 0.5]),
                    (vec!["H2".to_string()], vec![1.0, 0.0]),
                    (vec!["H3".to_string()], vec![0.0, 1.0]),
                ]
                .into(),
            },
        ],
    )
    .unwrap()
}

/// The burglary story as an influence diagram. The numbers are a reference
/// fixture, not ground truth; every check against this diagram goes through
/// the enumeration oracle rather than hard-coded posteriors.
///
/// ```
/// use cfaudit::influence::holmes_diagram;
/// use cfaudit::joint::Event;
///
/// let diagram = holmes_diagram();
/// let burglary = Event::var_eq("Burglary", "true");
/// let alarm = Event::var_eq("Alarm", "true");
/// let quake = Event::var_eq("Earthquake", "true");
///
/// let prior = diagram.infer(&burglary, &Event::All).unwrap();
/// let after_alarm = diagram.infer(&burglary, &alarm).unwrap();
/// let after_both = diagram
///     .infer(&burglary, &Event::and(vec![alarm, quake]))
///     .unwrap();
/// assert!(after_alarm > prior);      // the alarm suggests a burglary
/// assert!(after_both < after_alarm); // the earthquake explains it away
/// ```
pub fn holmes_diagram() -> InfluenceDiagram {
    let burglary = DiagramNode::binary("Burglary");
    let earthquake = DiagramNode::binary("Earthquake");
    let alarm = DiagramNode::binary("Alarm");
    let phone_call = DiagramNode::binary("PhoneCall");
    let radio = DiagramNode::binary("Radio");

    let alarm_cpt = noisy_or_cpt(
        &alarm,
        &[burglary.clone(), earthquake.clone()],
        &[
            ("Burglary".to_string(), 0.05),
            ("Earthquake".to_string(), 0.3),
        ]
        .into(),
        0.999,
        LeakMode::BaselineOnly,
    )
    .unwrap();

    InfluenceDiagram::new(
        vec![burglary, earthquake, alarm, phone_call, radio],
        vec![
            ("Burglary".into(), "Alarm".into()),
            ("Earthquake".into(), "Alarm".into()),
            ("Alarm".into(), "PhoneCall".into()),
            ("Earthquake".into(), "Radio".into()),
        ],
        vec![
            Cpt::marginal("Burglary", vec![0.01, 0.99]),
            Cpt::marginal("Earthquake", vec![0.001, 0.999]),
            alarm_cpt,
            Cpt {
                node: "PhoneCall".into(),
                parents: vec!["Alarm".into()],
                rows: [
                    (vec!["true".to_string()], vec![0.8, 0.2]),
                    (vec!["false".to_string()], vec![0.05, 0.95]),
                ]
                .into(),
            },
            Cpt {
                node: "Radio".into(),
                parents: vec!["Earthquake".into()],
                rows: [
                    (vec!["true".to_string()], vec![0.9, 0.1]),
                    (vec!["false".to_string()], vec![0.001, 0.999]),
                ]
                .into(),
            },
        ],
    )
    .unwrap()
}
