//! Certainty-factor inference networks, influence diagrams, and a
//! joint-distribution auditor for the assumptions hiding between them.
//!
//! Rule-based systems that reason under uncertainty attach a single number
//! to each rule, which quietly assumes the rule's strength is independent of
//! whatever else is known. This crate implements that model faithfully, and
//! then provides the instruments to catch it out:
//!
//! - [`cf`] — certainty-factor arithmetic: the likelihood-ratio mapping and
//!   the parallel, sequential, and antecedent combination functions.
//! - [`network`] — inference networks of CF-weighted rules, propagation, and
//!   topology lints for divergent links.
//! - [`joint`] — an explicit discrete joint distribution serving as a
//!   ground-truth oracle for probabilities, likelihood ratios, and
//!   context-dependent certainty factors.
//! - [`audit`] — the modularity auditor: enumerates evidence contexts and
//!   reports where `CF(H, E, e)` deviates from `CF(H, E, Ø)`, alongside the
//!   matching conditional-independence failures.
//! - [`urn`] — urn-drawing fixtures as one-line specs.
//! - [`influence`] — influence diagrams with exact inference by enumeration,
//!   missing-arc independence checks, noisy-OR table synthesis, and
//!   stale-tracked editing.
//! - [`format`] — the `.cfr` rulebase grammar and the `.idg` diagram file
//!   format used by the command-line tool.
//!
//! The companion guide under `book/` walks through the concepts with the
//! same fixtures used in the test suite.

pub mod audit;
pub mod cf;
pub mod cli;
pub mod format;
pub mod influence;
pub mod joint;
pub mod network;
pub mod urn;
