use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EdgeKind, NodeKind, OdkgGraph};
use crate::terminology::Source;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub nodes_by_kind: BTreeMap<NodeKind, usize>,
    pub cui_nodes: usize,
    /// RxNorm codes attached to graph nodes.
    pub rxcui_annotations: usize,
    pub edges_by_kind: BTreeMap<EdgeKind, usize>,
    pub total_nodes: usize,
    pub total_edges: usize,
}

pub fn graph_stats(graph: &OdkgGraph) -> StatsReport {
    let mut nodes_by_kind: BTreeMap<NodeKind, usize> =
        NodeKind::ALL.into_iter().map(|k| (k, 0)).collect();
    let mut edges_by_kind: BTreeMap<EdgeKind, usize> =
        EdgeKind::ALL.into_iter().map(|k| (k, 0)).collect();
    let mut rxcui_annotations = 0;
    for n in graph.nodes() {
        *nodes_by_kind.entry(n.kind).or_default() += 1;
        rxcui_annotations += n
            .codes
            .iter()
            .filter(|c| c.source == Source::RxNorm)
            .count();
    }
    for e in graph.edges() {
        *edges_by_kind.entry(e.rel).or_default() += 1;
    }
    StatsReport {
        cui_nodes: nodes_by_kind[&NodeKind::CuiHub],
        nodes_by_kind,
        rxcui_annotations,
        edges_by_kind,
        total_nodes: graph.len(),
        total_edges: graph.edges().len(),
    }
}

impl std::fmt::Display for StatsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.nodes_by_kind {
            writeln!(f, "{:<24}{v:>8}", k.to_string())?;
        }
        writeln!(f, "{:<24}{:>8}", "total nodes", self.total_nodes)?;
        writeln!(f, "{:<24}{:>8}", "cui nodes", self.cui_nodes)?;
        writeln!(
            f,
            "{:<24}{:>8}",
            "rxcui annotations", self.rxcui_annotations
        )?;
        for (k, v) in &self.edges_by_kind {
            writeln!(f, "{:<24}{v:>8}", k.as_str())?;
        }
        write!(f, "{:<24}{:>8}", "total edges", self.total_edges)
    }
}
