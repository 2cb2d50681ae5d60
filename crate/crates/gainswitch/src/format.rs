//! JSON files for graphs, partitions and fingerprints.
//!
//! Graph files embed their group:
//! `{"group": {"kind": "cyclic", "n": 4}, "n": 13, "edges": [{"u": 0, "v": 1, "gain": "z^0"}], "name": "..."}`.
//! A gain is the label of the element on the arc `u -> v`. Partition files
//! are `{"cells": [[0], [1, 2, 3], ...]}` with `C_0` first. Errors carry the
//! line and column of malformed JSON or the path of an invalid field.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use gainswitch_core::cospectral::SpectralFingerprint;
use gainswitch_core::graph::GainGraph;
use gainswitch_core::group::{Group, GroupSpec};
use gainswitch_core::switching::WQHPartition;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex count accepted from a file.
pub const MAX_VERTICES: usize = 4096;
/// Largest cyclic group order accepted from a file.
pub const MAX_CYCLIC_ORDER: usize = 1024;
/// Largest multiplication table accepted from a file.
pub const MAX_TABLE_ORDER: usize = 256;

/// Where in the input an error was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Text { line: usize, column: usize },
    Field(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "line {line}, column {column}"),
            Location::Field(path) => f.write_str(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct FormatError {
    pub location: Location,
    pub message: String,
}

impl FormatError {
    fn field(path: impl Into<String>, message: impl fmt::Display) -> Self {
        FormatError { location: Location::Field(path.into()), message: message.to_string() }
    }

    fn json(e: serde_json::Error) -> Self {
        FormatError { location: Location::Text { line: e.line(), column: e.column() }, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupFile {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Table { labels: Vec<String>, table: Vec<Vec<usize>> },
}

impl GroupFile {
    pub fn from_group(g: &Group) -> Self {
        match g.spec() {
            GroupSpec::Cyclic(n) => GroupFile::Cyclic { n },
            GroupSpec::Symmetric(n) => GroupFile::Symmetric { n },
            GroupSpec::Table { labels, table } => GroupFile::Table { labels, table },
        }
    }

    pub fn build(&self) -> Result<Group, FormatError> {
        let spec = match self {
            GroupFile::Cyclic { n } if *n > MAX_CYCLIC_ORDER => {
                return Err(FormatError::field("group.n", format!("cyclic order above {MAX_CYCLIC_ORDER}")));
            }
            GroupFile::Table { labels, .. } if labels.len() > MAX_TABLE_ORDER => {
                return Err(FormatError::field("group.labels", format!("table order above {MAX_TABLE_ORDER}")));
            }
            GroupFile::Cyclic { n } => GroupSpec::Cyclic(*n),
            GroupFile::Symmetric { n } => GroupSpec::Symmetric(*n),
            GroupFile::Table { labels, table } => GroupSpec::Table { labels: labels.clone(), table: table.clone() },
        };
        Group::from_spec(&spec).map_err(|e| FormatError::field("group", e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub u: usize,
    pub v: usize,
    pub gain: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub group: GroupFile,
    pub n: usize,
    pub edges: Vec<EdgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// A parsed graph with its optional metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedGraph {
    pub graph: GainGraph,
    pub name: Option<String>,
    pub source: Option<String>,
}

impl GraphFile {
    pub fn from_graph(g: &GainGraph, name: Option<String>, source: Option<String>) -> Self {
        let grp = g.group();
        let edges = g.edges().map(|(u, v, x)| EdgeFile { u, v, gain: grp.label(x).to_string() }).collect();
        GraphFile { group: GroupFile::from_group(grp), n: g.vertex_count(), edges, name, source }
    }

    pub fn build(&self) -> Result<LoadedGraph, FormatError> {
        if self.n > MAX_VERTICES {
            return Err(FormatError::field("n", format!("more than {MAX_VERTICES} vertices")));
        }
        let group = Arc::new(self.group.build()?);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let at = |field: &str| format!("edges[{i}].{field}");
            for (field, x) in [("u", e.u), ("v", e.v)] {
                if x >= self.n {
                    return Err(FormatError::field(at(field), format!("vertex {x} out of range for n = {}", self.n)));
                }
            }
            if e.u == e.v {
                return Err(FormatError::field(at("v"), format!("loop at vertex {}", e.u)));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(FormatError::field(at("v"), format!("repeated edge {{{}, {}}}", e.u, e.v)));
            }
            let gain = group.element_by_label(&e.gain).map_err(|err| FormatError::field(at("gain"), err))?;
            edges.push((e.u, e.v, gain));
        }
        let graph = GainGraph::new(&group, self.n, edges).map_err(|e| FormatError::field("edges", e))?;
        Ok(LoadedGraph { graph, name: self.name.clone(), source: self.source.clone() })
    }
}

pub fn parse_graph(text: &str) -> Result<LoadedGraph, FormatError> {
    serde_json::from_str::<GraphFile>(text).map_err(FormatError::json)?.build()
}

/// Pretty JSON with edges in `(u, v)` order, `u < v`, and a trailing newline.
pub fn graph_to_json(g: &GainGraph, name: Option<String>, source: Option<String>) -> String {
    let mut s = serde_json::to_string_pretty(&GraphFile::from_graph(g, name, source)).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub cells: Vec<Vec<usize>>,
}

/// Parses a partition of `n` vertices.
pub fn parse_partition(text: &str, n: usize) -> Result<WQHPartition, FormatError> {
    let file: PartitionFile = serde_json::from_str(text).map_err(FormatError::json)?;
    WQHPartition::new(n, file.cells).map_err(|e| FormatError::field("cells", e))
}

pub fn partition_to_json(p: &WQHPartition) -> String {
    let mut s = serde_json::to_string(&PartitionFile { cells: p.cells().to_vec() }).expect("serializable");
    s.push('\n');
    s
}

/// One fingerprint moment: class representative label to value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentFile {
    pub h: usize,
    pub classes: Vec<ClassValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassValue {
    pub class: String,
    pub value: String,
}

/// Moments `h = 1..=H`, each listing the nonzero class values in class order.
pub fn fingerprint_entries(fp: &SpectralFingerprint) -> Vec<MomentFile> {
    let grp = fp.group();
    let classes = grp.classes();
    fp.moments()
        .iter()
        .enumerate()
        .map(|(i, m)| MomentFile {
            h: i + 1,
            classes: m
                .values()
                .map(|(c, v)| ClassValue {
                    class: grp.labels()[classes[c][0]].clone(),
                    value: v.to_string(),
                })
                .collect(),
        })
        .collect()
}

pub fn fingerprint_to_json(fp: &SpectralFingerprint) -> String {
    let mut s = serde_json::to_string_pretty(&fingerprint_entries(fp)).expect("serializable");
    s.push('\n');
    s
}
