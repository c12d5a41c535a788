//! Graph file formats.
//!
//! * JSON: `{"n", "model", "params", "seed", "edges": [[u, v], ...], "labels"?}`.
//!   `labels` is an optional sidecar holding the planted assignment; drop it
//!   to hand a graph to a blind test.
//! * Edge list: a `# n=<n>` header line followed by one `u v` pair per line.
//!   Other `#` lines and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Labels, SparseGraph};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub model: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
}

impl GraphFile {
    pub fn new(graph: &SparseGraph, model: &str, params: BTreeMap<String, f64>, seed: u64) -> Self {
        GraphFile {
            n: graph.n(),
            model: model.to_string(),
            params,
            seed,
            edges: graph.edges().to_vec(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn graph(&self) -> Result<SparseGraph> {
        if let Some(labels) = &self.labels {
            if labels.n() != self.n {
                return Err(Error::Format(format!(
                    "labels cover {} vertices, graph has {}",
                    labels.n(),
                    self.n
                )));
            }
        }
        SparseGraph::from_edges(self.n, self.edges.iter().copied())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn to_edge_list(graph: &SparseGraph) -> String {
    let mut out = format!("# n={}\n", graph.n());
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn from_edge_list(text: &str) -> Result<SparseGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("n=") {
                let parsed = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("line {}: bad vertex count `{value}`", lineno + 1)))?;
                n = Some(parsed);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut next = || -> Result<usize> {
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Format(format!("line {}: expected `u v`", lineno + 1)))
        };
        edges.push((next()?, next()?));
    }
    let n = n.ok_or_else(|| Error::Format("missing `# n=<n>` header".into()))?;
    SparseGraph::from_edges(n, edges)
}
