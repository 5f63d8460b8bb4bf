//! End-to-end checks for the claims the library is built around. Each test
//! prints one `pass` line (or `FAIL` before panicking) so the suite doubles
//! as a checklist when run with `--nocapture`.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfaudit::audit::{audit_modularity, AuditFindingKind, EvidenceSet, NamedEvent};
use cfaudit::cf::{cf_from_lambda, combine_parallel, LikelihoodRatio};
use cfaudit::format::diagram::DiagramDocument;
use cfaudit::format::rulebase::{RulebaseDocument, HOLMES_CFR};
use cfaudit::influence::{
    holmes_diagram, noisy_or_cpt, Cpt, DiagramNode, InfluenceDiagram, LeakMode,
};
use cfaudit::joint::{Event, JointModel, Variable};
use cfaudit::network::{holmes_rules, InferenceNetwork, Rule};
use cfaudit::urn::UrnSpec;

const TOL: f64 = 1e-9;

fn criterion(label: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("{label}: pass"),
        Err(cause) => {
            println!("{label}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn audit_sites(
    report: &cfaudit::audit::AuditReport,
    kind: AuditFindingKind,
) -> BTreeSet<(String, String)> {
    report
        .violations(kind)
        .map(|f| (f.evidence.clone(), f.context.clone()))
        .collect()
}

#[test]
fn two_urn_with_replacement_is_modular() {
    criterion(
        "two urns with replacement: lambda 0.5, CF -0.5, clean audit",
        || {
            let spec = UrnSpec::parse("1W2B,2W1B;draws=2;replace=true").unwrap();
            let model = spec.to_model().unwrap();
            let h1 = Event::var_eq("urn", "1");
            let white = Event::var_eq("draw1", "W");
            let lambda = model.likelihood_ratio(&h1, &white, &Event::All).unwrap();
            match lambda {
                LikelihoodRatio::Finite(value) => assert!((value - 0.5).abs() <= TOL),
                other => panic!("expected a finite ratio, got {other:?}"),
            }
            let cf = model.contextual_cf(&h1, &white, &Event::All).unwrap().cf;
            assert!((cf.value() - (-0.5)).abs() <= TOL);

            let evidence = EvidenceSet::new(vec![
                NamedEvent::new("draw1=W", Event::var_eq("draw1", "W")),
                NamedEvent::new("draw2=W", Event::var_eq("draw2", "W")),
            ]);
            let report = audit_modularity(&model, &h1, &evidence, None).unwrap();
            assert!(!report.has_violations(), "findings: {:?}", report.findings);
            assert!(report.sites_examined > 0);
        },
    );
}

#[test]
fn three_urn_breaks_modularity() {
    criterion(
        "three urns: CF 0 without context vs 1 given a white draw",
        || {
            let model = UrnSpec::parse("1W1B,2W0B,0W2B;draws=2;replace=true")
                .unwrap()
                .to_model()
                .unwrap();
            let h1 = Event::var_eq("urn", "1");
            let not_h1 = Event::not(h1.clone());
            let black2 = Event::var_eq("draw2", "B");
            let white1 = Event::var_eq("draw1", "W");

            let p = model.conditional(&black2, &not_h1).unwrap();
            assert!((p - 0.5).abs() <= TOL);
            let p = model
                .conditional(&black2, &Event::and(vec![not_h1, white1.clone()]))
                .unwrap();
            assert_eq!(p, 0.0);

            let baseline = model.contextual_cf(&h1, &black2, &Event::All).unwrap();
            assert!(baseline.cf.value().abs() <= TOL);
            let shifted = model.contextual_cf(&h1, &black2, &white1).unwrap();
            assert_eq!(shifted.lambda, LikelihoodRatio::Infinite);
            assert_eq!(shifted.cf.value(), 1.0);

            let evidence = EvidenceSet::new(vec![
                NamedEvent::new("draw1=W", Event::var_eq("draw1", "W")),
                NamedEvent::new("draw2=B", Event::var_eq("draw2", "B")),
            ]);
            let report = audit_modularity(&model, &h1, &evidence, None).unwrap();
            let cf_sites = audit_sites(&report, AuditFindingKind::ModularityViolation);
            let ci_sites = audit_sites(&report, AuditFindingKind::CiViolation);
            assert!(!cf_sites.is_empty());
            for site in &cf_sites {
                assert!(ci_sites.contains(site), "no CI finding at {site:?}");
            }
        },
    );
}

#[test]
fn drawing_without_replacement_couples_the_draws() {
    criterion(
        "two urns without replacement: draws dependent, audit flags it",
        || {
            let model = UrnSpec::parse("1W2B,2W1B;draws=2;replace=false")
                .unwrap()
                .to_model()
                .unwrap();
            let h2 = Event::var_eq("urn", "2");
            let black1 = Event::var_eq("draw1", "B");
            let white1 = Event::var_eq("draw1", "W");
            let black2 = Event::var_eq("draw2", "B");

            let p = model
                .conditional(&black2, &Event::and(vec![h2.clone(), black1.clone()]))
                .unwrap();
            assert_eq!(p, 0.0);
            let p = model
                .conditional(&black2, &Event::and(vec![h2, white1]))
                .unwrap();
            assert_eq!(p, 0.5);

            let h1 = Event::var_eq("urn", "1");
            let outcome = model.ci_given(&h1, &black2, &black1, TOL).unwrap();
            assert!(!outcome.holds(), "expected dependence, got {outcome:?}");

            let evidence = EvidenceSet::new(vec![
                NamedEvent::new("draw1=W", Event::var_eq("draw1", "W")),
                NamedEvent::new("draw2=W", Event::var_eq("draw2", "W")),
            ]);
            let report = audit_modularity(&model, &h1, &evidence, None).unwrap();
            assert!(report.has_violations());
        },
    );
}

#[test]
fn parallel_combination_multiplies_likelihood_ratios() {
    criterion(
        "parallel combination tracks products of likelihood ratios",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b3c4d);
            for _ in 0..10_000 {
                let l1 = 10f64.powf(rng.gen_range(-3.0..3.0));
                let l2 = 10f64.powf(rng.gen_range(-3.0..3.0));
                let a = cf_from_lambda(LikelihoodRatio::finite(l1).unwrap()).unwrap();
                let b = cf_from_lambda(LikelihoodRatio::finite(l2).unwrap()).unwrap();
                let combined = combine_parallel(a, b).unwrap();
                let direct = cf_from_lambda(LikelihoodRatio::finite(l1 * l2).unwrap()).unwrap();
                assert!(
                    (combined.value() - direct.value()).abs() <= TOL,
                    "lambda {l1} x {l2}: {} vs {}",
                    combined.value(),
                    direct.value()
                );
            }
        },
    );
}

fn random_binary_model(rng: &mut impl Rng, evidence_vars: usize) -> JointModel {
    let mut variables = vec![Variable::new("h", ["t", "f"]).unwrap()];
    for i in 1..=evidence_vars {
        variables.push(Variable::new(format!("e{i}"), ["t", "f"]).unwrap());
    }
    let total = 1usize << (evidence_vars + 1);
    let mut weights: Vec<f64> = (0..total).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    JointModel::from_weights(variables, weights).unwrap()
}

#[test]
fn cf_shifts_and_ci_failures_mark_the_same_sites() {
    criterion(
        "context-sensitive CF and CI failure coincide on random models",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
            for round in 0..1_000 {
                let evidence_vars = rng.gen_range(2..=3usize);
                let model = random_binary_model(&mut rng, evidence_vars);
                let members = (1..=evidence_vars)
                    .map(|i| {
                        NamedEvent::new(format!("e{i}=t"), Event::var_eq(format!("e{i}"), "t"))
                    })
                    .collect();
                let report = audit_modularity(
                    &model,
                    &Event::var_eq("h", "t"),
                    &EvidenceSet::new(members),
                    None,
                )
                .unwrap();
                let cf_sites = audit_sites(&report, AuditFindingKind::ModularityViolation);
                let ci_sites = audit_sites(&report, AuditFindingKind::CiViolation);
                assert_eq!(cf_sites, ci_sites, "round {round}");
            }
        },
    );
}

#[test]
fn mixtures_of_distinct_hypotheses_always_break_independence() {
    criterion(
        "three-hypothesis mixtures: some negated hypothesis couples the evidence",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
            for round in 0..500 {
                // Two evidence variables, independent given each hypothesis, with
                // activation probabilities kept pairwise distinct per variable so
                // no two hypotheses induce proportional likelihoods.
                let mut p = [[0.0f64; 2]; 3];
                loop {
                    for row in p.iter_mut() {
                        for cell in row.iter_mut() {
                            *cell = rng.gen_range(0.05..0.95);
                        }
                    }
                    let distinct = (0..3).all(|a| {
                        (a + 1..3).all(|b| (0..2).all(|j| (p[a][j] - p[b][j]).abs() > 0.01))
                    });
                    if distinct {
                        break;
                    }
                }
                let mut priors = [
                    rng.gen_range(0.1..1.0),
                    rng.gen_range(0.1..1.0),
                    rng.gen_range(0.1..1.0),
                ];
                let total: f64 = priors.iter().sum();
                for prior in &mut priors {
                    *prior /= total;
                }
                let variables = vec![
                    Variable::new("h", ["H1", "H2", "H3"]).unwrap(),
                    Variable::new("e1", ["t", "f"]).unwrap(),
                    Variable::new("e2", ["t", "f"]).unwrap(),
                ];
                let model = JointModel::from_fn(variables, |assignment| {
                    let h = assignment[0];
                    let l1 = if assignment[1] == 0 {
                        p[h][0]
                    } else {
                        1.0 - p[h][0]
                    };
                    let l2 = if assignment[2] == 0 {
                        p[h][1]
                    } else {
                        1.0 - p[h][1]
                    };
                    priors[h] * l1 * l2
                })
                .unwrap();

                let e1 = Event::var_eq("e1", "t");
                let e2 = Event::var_eq("e2", "t");
                let failed = ["H1", "H2", "H3"].iter().any(|name| {
                    let h = Event::var_eq("h", *name);
                    !model.ci_given(&h, &e1, &e2, 1e-9).unwrap().holds()
                });
                assert!(failed, "round {round}: every mixture looked independent");
            }
        },
    );
}

#[test]
fn divergent_link_lint_and_its_exemption() {
    criterion(
        "divergent links: flagged in the alarm network, exempt when isolated",
        || {
            let net = InferenceNetwork::build(holmes_rules()).unwrap();
            let findings = net.find_divergent_links();
            assert_eq!(findings.iter().filter(|f| !f.exempt).count(), 1);

            let isolated = InferenceNetwork::build(vec![
                Rule::new(
                    "r1",
                    cfaudit::network::Antecedent::prop("E"),
                    "H1",
                    cfaudit::cf::CertaintyFactor::new(0.4).unwrap(),
                )
                .unwrap(),
                Rule::new(
                    "r2",
                    cfaudit::network::Antecedent::prop("E"),
                    "H2",
                    cfaudit::cf::CertaintyFactor::new(0.4).unwrap(),
                )
                .unwrap(),
            ])
            .unwrap();
            let findings = isolated.find_divergent_links();
            assert_eq!(findings.len(), 1);
            assert!(findings[0].exempt);
        },
    );
}

fn random_diagram(rng: &mut impl Rng) -> InfluenceDiagram {
    let n = rng.gen_range(2..=6usize);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut arcs = Vec::new();
    for child in 1..n {
        for parent in 0..child {
            if rng.gen_bool(0.4) {
                arcs.push((names[parent].clone(), names[child].clone()));
            }
        }
    }
    let nodes: Vec<DiagramNode> = names.iter().map(DiagramNode::binary).collect();
    let mut cpts = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let parents: Vec<String> = (0..i)
            .filter(|p| arcs.contains(&(names[*p].clone(), name.clone())))
            .map(|p| names[p].clone())
            .collect();
        let mut rows = BTreeMap::new();
        let combos = 1usize << parents.len();
        for combo in 0..combos {
            let key: Vec<String> = (0..parents.len())
                .map(|bit| {
                    if combo >> bit & 1 == 0 {
                        "true"
                    } else {
                        "false"
                    }
                    .to_string()
                })
                .collect();
            let p = rng.gen_range(0.05..0.95);
            rows.insert(key, vec![p, 1.0 - p]);
        }
        cpts.push(Cpt {
            node: name.clone(),
            parents,
            rows,
        });
    }
    InfluenceDiagram::new(nodes, arcs, cpts).unwrap()
}

/// Test-local enumeration over raw bit vectors, sharing no code with the
/// library's joint-model plumbing.
fn brute_force_conditional(diagram: &InfluenceDiagram, query: &str, given: &str) -> f64 {
    let names: Vec<String> = diagram.nodes().map(|n| n.name.clone()).collect();
    let index: BTreeMap<&str, usize> = names.iter().map(|n| n.as_str()).zip(0..).collect();
    let mut joint_and = 0.0;
    let mut joint_given = 0.0;
    for bits in 0..(1u32 << names.len()) {
        let outcome = |node: &str| -> &str {
            if bits >> index[node] & 1 == 0 {
                "true"
            } else {
                "false"
            }
        };
        let mut weight = 1.0;
        for name in &names {
            let cpt = diagram.cpt(name).expect("complete diagram");
            let combo: Vec<String> = cpt.parents.iter().map(|p| outcome(p).to_string()).collect();
            let row = &cpt.rows[&combo];
            weight *= if outcome(name) == "true" {
                row[0]
            } else {
                row[1]
            };
        }
        if outcome(given) == "true" {
            joint_given += weight;
            if outcome(query) == "true" {
                joint_and += weight;
            }
        }
    }
    joint_and / joint_given
}

#[test]
fn inference_matches_independent_enumeration() {
    criterion(
        "exact inference agrees with a test-local enumerator",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
            for round in 0..200 {
                let diagram = random_diagram(&mut rng);
                let names: Vec<String> = diagram.nodes().map(|n| n.name.clone()).collect();
                let query = names.last().unwrap();
                let given = names.first().unwrap();
                let ours = diagram
                    .infer(&Event::var_eq(query, "true"), &Event::var_eq(given, "true"))
                    .unwrap();
                let reference = brute_force_conditional(&diagram, query, given);
                assert!(
                    (ours - reference).abs() <= TOL,
                    "round {round}: {ours} vs {reference}"
                );
            }
        },
    );
}

#[test]
fn edits_only_stale_the_nodes_whose_parents_changed() {
    criterion(
        "adding a cause stales only it and its child; deleting a leaf stales nothing",
        || {
            let original = holmes_diagram();
            let (edited, report) = original
                .add_node(
                    DiagramNode::binary("AprilFools"),
                    &[("AprilFools".to_string(), "PhoneCall".to_string())],
                )
                .unwrap();
            let expected: BTreeSet<String> = ["AprilFools", "PhoneCall"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            assert_eq!(report.stale_nodes, expected);
            assert_eq!(edited.stale(), &expected);
            for untouched in ["Alarm", "Burglary", "Earthquake", "Radio"] {
                let before = original.cpt(untouched).unwrap();
                let after = edited.cpt(untouched).unwrap();
                assert!(
                    std::sync::Arc::ptr_eq(before, after),
                    "{untouched} was copied"
                );
            }

            let (pruned, report) = original.delete_node("Radio").unwrap();
            assert!(report.stale_nodes.is_empty());
            assert!(pruned.stale().is_empty());
            assert!(pruned.is_complete());
        },
    );
}

#[test]
fn alarm_raises_burglary_and_earthquake_explains_it_away() {
    criterion("explaining away in the alarm network", || {
        let diagram = holmes_diagram();
        let burglary = Event::var_eq("Burglary", "true");
        let alarm = Event::var_eq("Alarm", "true");
        let quake = Event::var_eq("Earthquake", "true");
        let prior = diagram.infer(&burglary, &Event::All).unwrap();
        let after_alarm = diagram.infer(&burglary, &alarm).unwrap();
        let after_both = diagram
            .infer(&burglary, &Event::and(vec![alarm, quake]))
            .unwrap();
        assert!(after_alarm > prior);
        assert!(after_both < after_alarm);
    });
}

#[test]
fn noisy_or_multiplies_inhibitions() {
    criterion(
        "noisy-OR: inhibitions multiply, activation is monotone",
        || {
            let node = DiagramNode::binary("effect");
            let causes = [DiagramNode::binary("c1"), DiagramNode::binary("c2")];
            let q: BTreeMap<String, f64> =
                [("c1".to_string(), 0.05), ("c2".to_string(), 0.3)].into();
            let cpt = noisy_or_cpt(&node, &causes, &q, 1.0, LeakMode::BaselineOnly).unwrap();
            let both = &cpt.rows[&vec!["true".to_string(), "true".to_string()]];
            assert_eq!(both[1], 0.05 * 0.3);

            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
            for _ in 0..100 {
                let q: BTreeMap<String, f64> = [
                    ("c1".to_string(), rng.gen_range(0.0..1.0)),
                    ("c2".to_string(), rng.gen_range(0.0..1.0)),
                ]
                .into();
                let leak = rng.gen_range(0.0..1.0);
                let cpt = noisy_or_cpt(&node, &causes, &q, leak, LeakMode::Every).unwrap();
                let active =
                    |combo: &[String]| combo.iter().filter(|o| o.as_str() == "true").count();
                for (a, row_a) in &cpt.rows {
                    for (b, row_b) in &cpt.rows {
                        let superset = a
                            .iter()
                            .zip(b)
                            .all(|(oa, ob)| ob == "true" || oa == ob || oa == "false");
                        if superset && active(a) <= active(b) {
                            assert!(row_a[0] <= row_b[0] + TOL);
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn parsers_round_trip_and_the_tool_keeps_its_exit_codes() {
    criterion("format round-trips and command exit codes", || {
        let doc = RulebaseDocument::parse(HOLMES_CFR).unwrap();
        let again = RulebaseDocument::parse(&doc.serialize()).unwrap();
        assert_eq!(doc, again);
        for fixture in ["tests/fixtures/three_urn.idg", "tests/fixtures/holmes.idg"] {
            let text = std::fs::read_to_string(fixture).unwrap();
            let doc = DiagramDocument::parse(&text).unwrap();
            assert_eq!(DiagramDocument::parse(&doc.serialize()).unwrap(), doc);
        }

        let bin = env!("CARGO_BIN_EXE_cfaudit");
        let code = |args: &[&str]| {
            Command::new(bin)
                .args(args)
                .output()
                .unwrap()
                .status
                .code()
                .unwrap()
        };
        assert_eq!(code(&["propagate", "tests/fixtures/holmes.cfr"]), 0);
        assert_eq!(code(&["lint", "tests/fixtures/holmes.cfr"]), 1);
        assert_eq!(
            code(&[
                "audit",
                "urn:1W2B,2W1B;draws=2;replace=true",
                "--hypothesis",
                "urn=1"
            ]),
            0
        );
        assert_eq!(
            code(&[
                "audit",
                "urn:1W1B,2W0B,0W2B;draws=2;replace=true",
                "--hypothesis",
                "urn=1"
            ]),
            1
        );
        assert_eq!(
            code(&[
                "infer",
                "tests/fixtures/holmes.idg",
                "--query",
                "Burglary=true"
            ]),
            0
        );
        assert_eq!(code(&["infer", "no-such-file.idg", "--query", "x=y"]), 2);
        assert_eq!(code(&["propagate"]), 2);
    });
}
