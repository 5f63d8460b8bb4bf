//! The `cfaudit` command-line tool.
//!
//! Subcommands cover propagation over `.cfr` rulebases, topology linting,
//! modularity audits against `.idg` diagrams or `urn:` specs, exact
//! inference, missing-arc independence checks, and stale-tracked diagram
//! edits.
//!
//! Exit codes: `0` success with no findings, `1` findings reported (lint or
//! audit violations), `2` usage or input error. Findings go to standard
//! output, diagnostics to standard error.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::audit::{audit_modularity, AuditFindingKind, EvidenceSet, NamedEvent};
use crate::cf::CertaintyFactor;
use crate::format::diagram::DiagramDocument;
use crate::format::rulebase::RulebaseDocument;
use crate::influence::{Cpt, DiagramNode, InfluenceDiagram};
use crate::joint::{Event, JointModel};
use crate::network::InferenceNetwork;
use crate::urn::UrnSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cfaudit",
    about = "Certainty-factor networks, influence diagrams, and modularity audits",
    long_about = None,
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate evidence CFs through a rulebase and print per-hypothesis CFs.
    Propagate {
        /// Path to a `.cfr` rulebase.
        rulebase: PathBuf,
        /// Evidence assertions `prop=cf`, overriding any declared in the file.
        #[arg(long = "evidence", value_name = "PROP=CF")]
        evidence: Vec<String>,
    },
    /// Report divergent-link findings (and convergence notes) for a rulebase.
    Lint {
        /// Path to a `.cfr` rulebase.
        rulebase: PathBuf,
    },
    /// Audit semantic modularity of a hypothesis against a joint model.
    Audit {
        /// A `.idg` diagram file or an inline `urn:<spec>` model, e.g.
        /// `urn:1W2B,2W1B;draws=2;replace=false`.
        model: String,
        /// Hypothesis event, e.g. `urn=1`.
        #[arg(long)]
        hypothesis: String,
        /// Evidence events; for urn models these default to `drawN=W`.
        #[arg(long = "evidence", value_name = "EVENT")]
        evidence: Vec<String>,
    },
    /// Compute `p(query | given)` on a diagram by exact enumeration.
    Infer {
        diagram: PathBuf,
        #[arg(long)]
        query: String,
        /// Conditioning event; omit for the prior.
        #[arg(long, default_value = "")]
        given: String,
    },
    /// Check the conditional independence a missing arc asserts.
    CheckCi {
        diagram: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Mediating event, e.g. `Alarm=true`; omit for a-priori independence.
        #[arg(long, default_value = "")]
        given: String,
    },
    /// Edit a diagram, print the stale report, and write the result.
    Edit {
        diagram: PathBuf,
        #[command(subcommand)]
        edit: EditCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum EditCommand {
    /// Add a proposition (and optionally new arcs).
    AddNode {
        #[arg(long)]
        name: String,
        /// Comma-separated outcome labels; defaults to `true,false`.
        #[arg(long, default_value = "true,false")]
        outcomes: String,
        /// New arcs as `parent:child`; repeatable.
        #[arg(long = "arc", value_name = "PARENT:CHILD")]
        arcs: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Delete a proposition and its incident arcs.
    DeleteNode {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Install a reassessed CPT from a JSON fragment file.
    SetCpt {
        /// Node whose table is being reassessed.
        #[arg(long)]
        node: String,
        /// Path to a JSON file with `parents` and `rows` keys.
        #[arg(long)]
        cpt: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Where to write the edited diagram; defaults to editing in place.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Runs a parsed invocation, printing to the standard streams, and returns
/// the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(true) => EXIT_FINDINGS,
        Ok(false) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Propagate { rulebase, evidence } => propagate(&rulebase, &evidence, cli.format),
        Command::Lint { rulebase } => lint(&rulebase, cli.format),
        Command::Audit {
            model,
            hypothesis,
            evidence,
        } => audit(&model, &hypothesis, &evidence, cli.format),
        Command::Infer {
            diagram,
            query,
            given,
        } => infer(&diagram, &query, &given, cli.format),
        Command::CheckCi {
            diagram,
            a,
            b,
            given,
        } => check_ci(&diagram, &a, &b, &given, cli.format),
        Command::Edit { diagram, edit } => run_edit(&diagram, edit, cli.format),
    }
}

fn load_rulebase(path: &Path) -> Result<RulebaseDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    Ok(RulebaseDocument::parse(&text)?)
}

fn load_diagram(path: &Path) -> Result<InfluenceDiagram, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    Ok(DiagramDocument::parse(&text)?.to_diagram()?)
}

/// `node=outcome` conjunctions joined by `,`; `node!=outcome` negates one
/// constraint; the empty string is the universal event.
pub fn parse_event(text: &str) -> Result<Event, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Event::All);
    }
    let mut parts = Vec::new();
    for clause in text.split(',') {
        let clause = clause.trim();
        if let Some((var, outcome)) = clause.split_once("!=") {
            parts.push(Event::not(Event::var_eq(var.trim(), outcome.trim())));
        } else if let Some((var, outcome)) = clause.split_once('=') {
            parts.push(Event::var_eq(var.trim(), outcome.trim()));
        } else {
            return Err(CliError(format!(
                "malformed event clause '{clause}', expected 'node=outcome' or 'node!=outcome'"
            )));
        }
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Event::and(parts)
    })
}

fn propagate(path: &Path, overrides: &[String], format: OutputFormat) -> Result<bool, CliError> {
    let doc = load_rulebase(path)?;
    let net = InferenceNetwork::build(doc.rules.clone())?;
    let mut evidence: BTreeMap<String, CertaintyFactor> = doc.evidence.clone();
    for assertion in overrides {
        let (prop, value) = assertion.split_once('=').ok_or_else(|| {
            CliError(format!(
                "malformed evidence '{assertion}', expected 'prop=cf'"
            ))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError(format!("'{value}' is not a number")))?;
        evidence.insert(prop.trim().to_string(), CertaintyFactor::new(value)?);
    }
    let result = net.propagate(&evidence)?;
    let hypotheses: BTreeMap<&String, &CertaintyFactor> = result
        .iter()
        .filter(|(prop, _)| net.is_hypothesis(prop))
        .collect();
    match format {
        OutputFormat::Text => {
            for (prop, cf) in &hypotheses {
                println!("{prop}\t{cf}");
            }
        }
        OutputFormat::Json => {
            let body = json!({
                "evidence": evidence.iter()
                    .map(|(p, cf)| (p.clone(), cf.value()))
                    .collect::<BTreeMap<_, _>>(),
                "hypotheses": hypotheses.iter()
                    .map(|(p, cf)| ((*p).clone(), cf.value()))
                    .collect::<BTreeMap<_, _>>(),
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(false)
}

fn lint(path: &Path, format: OutputFormat) -> Result<bool, CliError> {
    let doc = load_rulebase(path)?;
    let net = InferenceNetwork::build(doc.rules)?;
    let findings = net.find_divergent_links();
    let convergent = net.find_convergent_links();
    match format {
        OutputFormat::Text => {
            for f in &findings {
                let severity = if f.exempt { "note" } else { "warning" };
                println!("{severity}: divergent-link: {}", f.message);
            }
            for info in &convergent {
                eprintln!(
                    "info: convergent links on '{}' (rules {}); sound only if the evidence is \
                     conditionally independent given the hypothesis and its negation",
                    info.hypothesis,
                    info.rule_ids.join(", ")
                );
            }
        }
        OutputFormat::Json => {
            let body = json!({ "findings": findings, "convergent": convergent });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(findings.iter().any(|f| !f.exempt))
}

fn audit(
    model_arg: &str,
    hypothesis: &str,
    evidence_args: &[String],
    format: OutputFormat,
) -> Result<bool, CliError> {
    let (model, default_evidence): (JointModel, Vec<NamedEvent>) =
        if let Some(spec) = model_arg.strip_prefix("urn:") {
            let spec = UrnSpec::parse(spec)?;
            let defaults = (1..=spec.draws)
                .map(|d| {
                    let label = format!("draw{d}=W");
                    NamedEvent::new(label, Event::var_eq(format!("draw{d}"), "W"))
                })
                .collect();
            (spec.to_model()?, defaults)
        } else {
            (load_diagram(Path::new(model_arg))?.to_joint()?, Vec::new())
        };

    let members = if evidence_args.is_empty() {
        if default_evidence.is_empty() {
            return Err(CliError(
                "no evidence events given; pass --evidence at least twice".to_string(),
            ));
        }
        default_evidence
    } else {
        evidence_args
            .iter()
            .map(|text| Ok(NamedEvent::new(text.clone(), parse_event(text)?)))
            .collect::<Result<Vec<_>, CliError>>()?
    };

    let hypothesis = parse_event(hypothesis)?;
    let report = audit_modularity(&model, &hypothesis, &EvidenceSet::new(members), None)?;
    match format {
        OutputFormat::Text => {
            for f in &report.findings {
                let tag = match f.kind {
                    AuditFindingKind::ModularityViolation => "modularity-violation",
                    AuditFindingKind::CiViolation => "ci-violation",
                    AuditFindingKind::UndefinedContext => "undefined-context",
                };
                println!("{tag}: {}", f.message);
            }
            eprintln!(
                "audited {} sites: {} findings",
                report.sites_examined,
                report.findings.len()
            );
        }
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(report.has_violations())
}

fn infer(path: &Path, query: &str, given: &str, format: OutputFormat) -> Result<bool, CliError> {
    let diagram = load_diagram(path)?;
    let probability = diagram.infer(&parse_event(query)?, &parse_event(given)?)?;
    match format {
        OutputFormat::Text => println!("{probability}"),
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "query": query,
                "given": given,
                "probability": probability,
            }))?
        ),
    }
    Ok(false)
}

fn check_ci(
    path: &Path,
    a: &str,
    b: &str,
    given: &str,
    format: OutputFormat,
) -> Result<bool, CliError> {
    let diagram = load_diagram(path)?;
    let mediators = parse_event(given)?;
    let independent = diagram.check_missing_arc_ci(a, b, &mediators)?;
    let joint = diagram.to_joint()?;
    let mut support = Vec::new();
    for oa in &diagram.node(a)?.outcomes {
        for ob in &diagram.node(b)?.outcomes {
            let ea = Event::var_eq(a, oa.clone());
            let eb = Event::var_eq(b, ob.clone());
            let pab = joint.conditional(&Event::and(vec![ea.clone(), eb.clone()]), &mediators)?;
            let pa = joint.conditional(&ea, &mediators)?;
            let pb = joint.conditional(&eb, &mediators)?;
            support.push((oa.clone(), ob.clone(), pab, pa * pb));
        }
    }
    match format {
        OutputFormat::Text => {
            println!("{independent}");
            for (oa, ob, pab, product) in &support {
                eprintln!(
                    "p({a}={oa}, {b}={ob} | given) = {pab}, product of marginals = {product}"
                );
            }
        }
        OutputFormat::Json => {
            let body = json!({
                "a": a,
                "b": b,
                "given": given,
                "independent": independent,
                "support": support.iter().map(|(oa, ob, pab, product)| json!({
                    "outcomes": [oa, ob],
                    "joint": pab,
                    "product": product,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(false)
}

fn run_edit(path: &Path, edit: EditCommand, format: OutputFormat) -> Result<bool, CliError> {
    let diagram = load_diagram(path)?;
    let (next, report, out) = match edit {
        EditCommand::AddNode {
            name,
            outcomes,
            arcs,
            out,
        } => {
            let node = DiagramNode::new(name, outcomes.split(',').map(str::trim))?;
            let arcs = arcs
                .iter()
                .map(|arc| {
                    arc.split_once(':')
                        .map(|(p, c)| (p.trim().to_string(), c.trim().to_string()))
                        .ok_or_else(|| {
                            CliError(format!("malformed arc '{arc}', expected 'parent:child'"))
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (next, report) = diagram.add_node(node, &arcs)?;
            (next, Some(report), out)
        }
        EditCommand::DeleteNode { name, out } => {
            let (next, report) = diagram.delete_node(&name)?;
            (next, Some(report), out)
        }
        EditCommand::SetCpt { node, cpt, out } => {
            let text = fs::read_to_string(&cpt)
                .map_err(|e| CliError(format!("cannot read {}: {e}", cpt.display())))?;
            let doc: crate::format::diagram::CptDoc = serde_json::from_str(&text)?;
            let rows = doc
                .rows
                .into_iter()
                .map(|(key, row)| {
                    let combo = if key.is_empty() {
                        Vec::new()
                    } else {
                        key.split(',').map(str::to_string).collect()
                    };
                    (combo, row)
                })
                .collect();
            let next = diagram.set_cpt(Cpt {
                node,
                parents: doc.parents,
                rows,
            })?;
            (next, None, out)
        }
    };
    let target = out.out.unwrap_or_else(|| path.to_path_buf());
    fs::write(&target, DiagramDocument::from_diagram(&next).serialize())
        .map_err(|e| CliError(format!("cannot write {}: {e}", target.display())))?;
    match format {
        OutputFormat::Text => {
            if let Some(report) = &report {
                println!("edited: {}", report.edited);
                println!(
                    "stale: {}",
                    report
                        .stale_nodes
                        .iter()
                        .cloned()
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!(
                    "untouched: {}",
                    report
                        .untouched_nodes
                        .iter()
                        .cloned()
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            } else {
                println!(
                    "stale: {}",
                    next.stale().iter().cloned().collect::<Vec<_>>().join(", ")
                );
            }
            eprintln!("wrote {}", target.display());
        }
        OutputFormat::Json => {
            let body = json!({
                "report": report,
                "stale": next.stale(),
                "wrote": target.display().to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(false)
}
