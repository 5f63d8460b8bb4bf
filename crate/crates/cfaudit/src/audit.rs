//! The modularity auditor.
//!
//! A rule's certainty factor is written with two arguments, `CF(H, E)`, which
//! silently asserts that the three-argument quantity `CF(H, E, e)` does not
//! depend on the context `e` of other known evidence. Given an explicit joint
//! model, that assertion is checkable: enumerate every context formed from
//! truth assignments to the other evidence items, recompute the contextual
//! certainty factor, and compare it with the context-free baseline.
//!
//! The same sweep checks conditional independence given the hypothesis and
//! its negation. For convergent evidence the two criteria agree site by
//! site, and the auditor verifies that agreement as an internal cross-check.
//!
//! ```
//! use cfaudit::audit::{audit_modularity, EvidenceSet, NamedEvent};
//! use cfaudit::joint::Event;
//! use cfaudit::urn::UrnSpec;
//!
//! let model = UrnSpec::parse("1W1B,2W0B,0W2B;draws=2;replace=true")
//!     .unwrap().to_model().unwrap();
//! let evidence = EvidenceSet::new(vec![
//!     NamedEvent::new("draw1=W", Event::var_eq("draw1", "W")),
//!     NamedEvent::new("draw2=B", Event::var_eq("draw2", "B")),
//! ]);
//! let report = audit_modularity(&model, &Event::var_eq("urn", "1"), &evidence, None).unwrap();
//! assert!(report.has_violations());
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::joint::{CiOutcome, ContextualCf, Event, JointError, JointModel};
use crate::network::InferenceNetwork;

/// `|ΔCF|` (or `|Δp|`) beyond which a site counts as a violation. Large
/// enough to absorb rounding in rational fixtures, small enough that any
/// genuine context effect at desk scale is caught.
pub const VIOLATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("evidence members '{0}' and '{1}' are not logically distinct")]
    NotDistinct(String, String),
    #[error(
        "internal inconsistency: modularity and conditional-independence checks \
         disagree at site {evidence} | {context}"
    )]
    Inconsistent { evidence: String, context: String },
    #[error(transparent)]
    Joint(#[from] JointError),
}

/// An evidence event with a stable label used as its site key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedEvent {
    pub label: String,
    pub event: Event,
}

impl NamedEvent {
    pub fn new(label: impl Into<String>, event: Event) -> Self {
        NamedEvent {
            label: label.into(),
            event,
        }
    }
}

/// The evidence items bearing on one hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSet {
    members: Vec<NamedEvent>,
}

impl EvidenceSet {
    pub fn new(members: Vec<NamedEvent>) -> Self {
        EvidenceSet { members }
    }

    pub fn members(&self) -> &[NamedEvent] {
        &self.members
    }

    /// Pairwise logical distinctness, checked by enumeration: no member may
    /// entail another.
    pub fn validate(&self, model: &JointModel) -> Result<(), AuditError> {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if model.entails(&a.event, &b.event)? || model.entails(&b.event, &a.event)? {
                    return Err(AuditError::NotDistinct(a.label.clone(), b.label.clone()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditFindingKind {
    ModularityViolation,
    CiViolation,
    UndefinedContext,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFinding {
    pub kind: AuditFindingKind,
    pub hypothesis: String,
    pub evidence: String,
    pub context: String,
    pub baseline: Option<ContextualCf>,
    pub contextual: Option<ContextualCf>,
    pub message: String,
}

impl AuditFinding {
    fn site(&self) -> (String, String) {
        (self.evidence.clone(), self.context.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AuditReport {
    pub findings: Vec<AuditFinding>,
    pub sites_examined: usize,
}

impl AuditReport {
    pub fn has_violations(&self) -> bool {
        self.findings.iter().any(|f| {
            matches!(
                f.kind,
                AuditFindingKind::ModularityViolation | AuditFindingKind::CiViolation
            )
        })
    }

    pub fn violations(&self, kind: AuditFindingKind) -> impl Iterator<Item = &AuditFinding> {
        self.findings.iter().filter(move |f| f.kind == kind)
    }
}

/// One enumerated context: a truth assignment to a subset of the other
/// evidence members.
struct Context {
    event: Event,
    key: String,
    members: Vec<(usize, bool)>,
}

fn contexts_for(members: &[NamedEvent], skip: usize) -> Vec<Context> {
    let others: Vec<usize> = (0..members.len()).filter(|&j| j != skip).collect();
    let mut contexts = Vec::new();
    // Each other member is either absent from the context, asserted true,
    // or asserted false: 3^(n-1) combinations, minus the empty one.
    let total = 3usize.pow(others.len() as u32);
    for code in 1..total {
        let mut digits = code;
        let mut parts = Vec::new();
        let mut keys = Vec::new();
        let mut chosen = Vec::new();
        for &j in &others {
            let digit = digits % 3;
            digits /= 3;
            match digit {
                0 => {}
                1 => {
                    parts.push(members[j].event.clone());
                    keys.push(members[j].label.clone());
                    chosen.push((j, true));
                }
                _ => {
                    parts.push(Event::not(members[j].event.clone()));
                    keys.push(format!("~{}", members[j].label));
                    chosen.push((j, false));
                }
            }
        }
        if parts.is_empty() {
            continue;
        }
        keys.sort();
        contexts.push(Context {
            event: Event::and(parts),
            key: keys.join(" ∧ "),
            members: chosen,
        });
    }
    contexts
}

/// Sweeps every (evidence member, context) site, comparing the contextual
/// certainty factor against its context-free baseline and running the
/// conditional-independence twin check at the same site.
///
/// When a network is supplied (with the hypothesis's node name), contexts
/// containing a member from which the updating evidence lies on a directed
/// path to the hypothesis are excluded: the update measure is allowed to
/// depend on such upstream contexts by design, so they are out of audit
/// scope.
pub fn audit_modularity(
    model: &JointModel,
    hypothesis: &Event,
    evidence: &EvidenceSet,
    network: Option<(&InferenceNetwork, &str)>,
) -> Result<AuditReport, AuditError> {
    evidence.validate(model)?;
    let members = evidence.members();
    let mut findings = Vec::new();
    let mut sites_examined = 0usize;
    let mut modularity_sites: BTreeSet<(String, String)> = BTreeSet::new();
    let mut ci_sites: BTreeSet<(String, String)> = BTreeSet::new();

    for (i, member) in members.iter().enumerate() {
        let baseline = match model.contextual_cf(hypothesis, &member.event, &Event::All) {
            Ok(cf) => cf,
            Err(JointError::Cf(_)) => {
                findings.push(AuditFinding {
                    kind: AuditFindingKind::UndefinedContext,
                    hypothesis: hypothesis.to_string(),
                    evidence: member.label.clone(),
                    context: "Ø".to_string(),
                    baseline: None,
                    contextual: None,
                    message: format!(
                        "'{}' is impossible both given the hypothesis and given its negation; \
                         no baseline certainty factor exists",
                        member.label
                    ),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };

        for context in contexts_for(members, i) {
            if let Some((net, h_node)) = network {
                let on_path = context.members.iter().any(|&(j, _)| {
                    net.has_path(&members[j].label, &member.label)
                        && net.has_path(&member.label, h_node)
                });
                if on_path {
                    continue;
                }
            }
            sites_examined += 1;
            let contextual = match model.contextual_cf(hypothesis, &member.event, &context.event) {
                Ok(cf) => cf,
                Err(JointError::Cf(_))
                | Err(JointError::EmptySide(_))
                | Err(JointError::ImpossibleCondition) => {
                    findings.push(AuditFinding {
                        kind: AuditFindingKind::UndefinedContext,
                        hypothesis: hypothesis.to_string(),
                        evidence: member.label.clone(),
                        context: context.key.clone(),
                        baseline: Some(baseline.clone()),
                        contextual: None,
                        message: format!(
                            "no contextual certainty factor exists for '{}' in context {}: \
                             the context leaves no probability mass to condition on",
                            member.label, context.key
                        ),
                    });
                    continue;
                }
                Err(e) => return Err(e.into()),
            };

            let delta = (contextual.cf.value() - baseline.cf.value()).abs();
            if delta > VIOLATION_TOLERANCE {
                modularity_sites.insert((member.label.clone(), context.key.clone()));
                findings.push(AuditFinding {
                    kind: AuditFindingKind::ModularityViolation,
                    hypothesis: hypothesis.to_string(),
                    evidence: member.label.clone(),
                    context: context.key.clone(),
                    baseline: Some(baseline.clone()),
                    contextual: Some(contextual.clone()),
                    message: format!(
                        "the certainty factor for '{}' depends on context: {} without context \
                         vs {} given {}",
                        member.label, baseline.cf, contextual.cf, context.key
                    ),
                });
            }

            match model.ci_given(
                hypothesis,
                &member.event,
                &context.event,
                VIOLATION_TOLERANCE,
            )? {
                CiOutcome::Holds | CiOutcome::Vacuous => {}
                CiOutcome::Fails {
                    delta_given_h,
                    delta_given_not_h,
                } => {
                    ci_sites.insert((member.label.clone(), context.key.clone()));
                    findings.push(AuditFinding {
                        kind: AuditFindingKind::CiViolation,
                        hypothesis: hypothesis.to_string(),
                        evidence: member.label.clone(),
                        context: context.key.clone(),
                        baseline: Some(baseline.clone()),
                        contextual: Some(contextual),
                        message: format!(
                            "'{}' is not conditionally independent of {} given the hypothesis \
                             and its negation (Δ|H = {delta_given_h:.3e}, Δ|~H = {delta_given_not_h:.3e})",
                            member.label, context.key
                        ),
                    });
                }
            }
        }
    }

    // Cross-check between the two routes. A contextual CF can only move if
    // some conditional moved, so every modularity site must also be a CI
    // site; a hit the other way round is legitimate (both conditionals can
    // shift proportionally, leaving the ratio untouched).
    if let Some((evidence, context)) = modularity_sites.difference(&ci_sites).next().cloned() {
        return Err(AuditError::Inconsistent { evidence, context });
    }

    findings.sort_by(|a, b| a.site().cmp(&b.site()).then(a.kind.cmp(&b.kind)));
    Ok(AuditReport {
        findings,
        sites_examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::urn::UrnSpec;

    fn urn_model(spec: &str) -> JointModel {
        UrnSpec::parse(spec).unwrap().to_model().unwrap()
    }

    fn draws_evidence() -> EvidenceSet {
        EvidenceSet::new(vec![
            NamedEvent::new("draw1=W", Event::var_eq("draw1", "W")),
            NamedEvent::new("draw2=B", Event::var_eq("draw2", "B")),
        ])
    }

    #[test]
    fn with_replacement_two_urns_is_clean() {
        let m = urn_model("1W2B,2W1B;draws=2;replace=true");
        let report =
            audit_modularity(&m, &Event::var_eq("urn", "1"), &draws_evidence(), None).unwrap();
        assert!(!report.has_violations());
        assert!(report.sites_examined > 0);
    }

    #[test]
    fn three_urns_violate_with_matching_ci_sites() {
        let m = urn_model("1W1B,2W0B,0W2B;draws=2;replace=true");
        let report =
            audit_modularity(&m, &Event::var_eq("urn", "1"), &draws_evidence(), None).unwrap();
        assert!(report.has_violations());

        // The derivation pinned in the fixtures: CF(H1, B, Ø) = 0 but
        // CF(H1, B, W) = 1.
        let finding = report
            .violations(AuditFindingKind::ModularityViolation)
            .find(|f| f.evidence == "draw2=B" && f.context == "draw1=W")
            .expect("expected the white-then-black violation");
        assert!(finding.baseline.as_ref().unwrap().cf.value().abs() < 1e-9);
        assert_eq!(finding.contextual.as_ref().unwrap().cf.value(), 1.0);

        let mod_sites: BTreeSet<_> = report
            .violations(AuditFindingKind::ModularityViolation)
            .map(AuditFinding::site)
            .collect();
        let ci_sites: BTreeSet<_> = report
            .violations(AuditFindingKind::CiViolation)
            .map(AuditFinding::site)
            .collect();
        assert_eq!(mod_sites, ci_sites);
    }

    #[test]
    fn without_replacement_violates() {
        let m = urn_model("1W2B,2W1B;draws=2;replace=false");
        let report =
            audit_modularity(&m, &Event::var_eq("urn", "1"), &draws_evidence(), None).unwrap();
        assert!(report.has_violations());
    }

    #[test]
    fn undefined_contexts_are_reported_not_fatal() {
        // Urn 2 of 2W0B: a first black draw is impossible there, and some
        // two-draw contexts carry no mass at all.
        let m = urn_model("1W1B,2W0B,0W2B;draws=2;replace=true");
        let evidence = EvidenceSet::new(vec![
            NamedEvent::new("draw1=W", Event::var_eq("draw1", "W")),
            NamedEvent::new("draw2=W", Event::var_eq("draw2", "W")),
        ]);
        let report = audit_modularity(&m, &Event::var_eq("urn", "2"), &evidence, None).unwrap();
        assert!(report
            .findings
            .iter()
            .any(|f| f.kind == AuditFindingKind::UndefinedContext));
    }

    #[test]
    fn rejects_entailed_members() {
        let m = urn_model("1W2B,2W1B;draws=2;replace=true");
        let evidence = EvidenceSet::new(vec![
            NamedEvent::new("a", Event::var_eq("draw1", "W")),
            NamedEvent::new("b", Event::var_in("draw1", ["W", "B"])),
        ]);
        let err = audit_modularity(&m, &Event::var_eq("urn", "1"), &evidence, None).unwrap_err();
        assert!(matches!(err, AuditError::NotDistinct(_, _)));
    }

    #[test]
    fn network_excludes_upstream_contexts() {
        use crate::cf::CertaintyFactor;
        use crate::network::{Antecedent, Rule};

        // Chain a -> b -> h: when auditing how 'b' updates 'h', the context
        // 'a' reaches h only through b, so that site is out of scope.
        let net = InferenceNetwork::build(vec![
            Rule::new(
                "r1",
                Antecedent::prop("a"),
                "b",
                CertaintyFactor::new(0.5).unwrap(),
            )
            .unwrap(),
            Rule::new(
                "r2",
                Antecedent::prop("b"),
                "h",
                CertaintyFactor::new(0.5).unwrap(),
            )
            .unwrap(),
        ])
        .unwrap();

        let m = urn_model("1W1B,2W0B,0W2B;draws=2;replace=true");
        let evidence = EvidenceSet::new(vec![
            NamedEvent::new("a", Event::var_eq("draw1", "W")),
            NamedEvent::new("b", Event::var_eq("draw2", "B")),
        ]);
        let unrestricted =
            audit_modularity(&m, &Event::var_eq("urn", "1"), &evidence, None).unwrap();
        let restricted =
            audit_modularity(&m, &Event::var_eq("urn", "1"), &evidence, Some((&net, "h"))).unwrap();
        assert!(restricted.sites_examined < unrestricted.sites_examined);
        // Sites updating via 'b' in a context naming 'a' must be gone.
        assert!(restricted
            .findings
            .iter()
            .all(|f| !(f.evidence == "b" && f.context.contains('a'))));
    }

    #[test]
    fn report_is_sorted_by_site() {
        let m = urn_model("1W1B,2W0B,0W2B;draws=2;replace=true");
        let report =
            audit_modularity(&m, &Event::var_eq("urn", "1"), &draws_evidence(), None).unwrap();
        let sites: Vec<_> = report.findings.iter().map(AuditFinding::site).collect();
        let mut sorted = sites.clone();
        sorted.sort();
        assert_eq!(sites, sorted);
    }
}
