//! The `.idg` diagram file format.
//!
//! JSON with three top-level keys: `nodes` (name plus ordered outcomes),
//! `arcs` (parent/child pairs), and `cpts` (per node: `parents` in canonical
//! order and `rows` keyed by the comma-joined parent outcomes in that
//! order). Nodes listed without a CPT load as stale, so partially edited
//! diagrams survive a save/load cycle.
//!
//! ```text
//! {
//!   "nodes": [
//!     { "name": "Color", "outcomes": ["White", "Black"] },
//!     { "name": "Identity", "outcomes": ["H1", "H2", "H3"] }
//!   ],
//!   "arcs": [["Identity", "Color"]],
//!   "cpts": {
//!     "Color": { "parents": ["Identity"],
//!                "rows": { "H1": [0.5, 0.5], "H2": [1.0, 0.0], "H3": [0.0, 1.0] } },
//!     "Identity": { "parents": [], "rows": { "": [0.333, 0.334, 0.333] } }
//!   }
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::influence::{Cpt, DiagramError, DiagramNode, InfluenceDiagram};

#[derive(Debug, Error)]
pub enum DiagramFormatError {
    #[error("malformed diagram file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("arc references unknown node '{0}'")]
    UnknownArcNode(String),
    #[error("CPT declared for unknown node '{0}'")]
    UnknownCptNode(String),
    #[error("row key '{key}' for node '{node}' does not name outcomes of parents {parents:?}")]
    BadRowKey {
        node: String,
        key: String,
        parents: Vec<String>,
    },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub name: String,
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CptDoc {
    pub parents: Vec<String>,
    pub rows: BTreeMap<String, Vec<f64>>,
}

/// Textual mirror of an [`InfluenceDiagram`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub nodes: Vec<NodeDoc>,
    pub arcs: Vec<(String, String)>,
    pub cpts: BTreeMap<String, CptDoc>,
}

impl DiagramDocument {
    pub fn parse(text: &str) -> Result<Self, DiagramFormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn serialize(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    /// Semantic checks beyond what fits here (row completeness, row sums,
    /// acyclicity) are left to [`InfluenceDiagram::validate`].
    pub fn to_diagram(&self) -> Result<InfluenceDiagram, DiagramFormatError> {
        let mut nodes = Vec::new();
        for node in &self.nodes {
            nodes.push(DiagramNode::new(node.name.clone(), node.outcomes.clone())?);
        }
        let known: BTreeMap<&str, &NodeDoc> =
            self.nodes.iter().map(|n| (n.name.as_str(), n)).collect();
        for (parent, child) in &self.arcs {
            for end in [parent, child] {
                if !known.contains_key(end.as_str()) {
                    return Err(DiagramFormatError::UnknownArcNode(end.clone()));
                }
            }
        }
        let mut cpts = Vec::new();
        for (name, doc) in &self.cpts {
            if !known.contains_key(name.as_str()) {
                return Err(DiagramFormatError::UnknownCptNode(name.clone()));
            }
            let mut rows = BTreeMap::new();
            for (key, probabilities) in &doc.rows {
                let combo = split_row_key(key);
                if combo.len() != doc.parents.len()
                    || combo.iter().zip(&doc.parents).any(|(outcome, parent)| {
                        known
                            .get(parent.as_str())
                            .is_none_or(|p| !p.outcomes.contains(outcome))
                    })
                {
                    return Err(DiagramFormatError::BadRowKey {
                        node: name.clone(),
                        key: key.clone(),
                        parents: doc.parents.clone(),
                    });
                }
                rows.insert(combo, probabilities.clone());
            }
            cpts.push(Cpt {
                node: name.clone(),
                parents: doc.parents.clone(),
                rows,
            });
        }
        Ok(InfluenceDiagram::new(nodes, self.arcs.clone(), cpts)?)
    }

    /// Canonical document for a diagram: nodes and arcs sorted, CPTs of
    /// stale nodes omitted.
    pub fn from_diagram(diagram: &InfluenceDiagram) -> Self {
        let mut nodes: Vec<NodeDoc> = diagram
            .nodes()
            .map(|n| NodeDoc {
                name: n.name.clone(),
                outcomes: n.outcomes.clone(),
            })
            .collect();
        nodes.sort_by(|a, b| a.name.cmp(&b.name));
        let arcs: Vec<(String, String)> = diagram.arcs().cloned().collect();
        let mut cpts = BTreeMap::new();
        for node in &nodes {
            if let Some(cpt) = diagram.cpt(&node.name) {
                cpts.insert(
                    node.name.clone(),
                    CptDoc {
                        parents: cpt.parents.clone(),
                        rows: cpt
                            .rows
                            .iter()
                            .map(|(combo, row)| (combo.join(","), row.clone()))
                            .collect(),
                    },
                );
            }
        }
        DiagramDocument { nodes, arcs, cpts }
    }
}

fn split_row_key(key: &str) -> Vec<String> {
    if key.is_empty() {
        Vec::new()
    } else {
        key.split(',').map(str::to_string).collect()
    }
}
