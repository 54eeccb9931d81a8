//! The frozen knowledge graph.
//!
//! Nodes are dense `u32` handles assigned in construction order. Edges are
//! kept sorted by `(src, kind, dst)` with no duplicates, and both outgoing and
//! incoming adjacency lists are derived from that single edge list.

mod export;
mod query;
mod stats;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::terminology::{RelationType, SourceCode};

pub use export::{export_graph, import_graph, GraphDocument};
pub use stats::{graph_stats, StatsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    AtcClass,
    RxGenericIngredient,
    RxClass,
    CuiHub,
}

impl NodeKind {
    pub const ALL: [NodeKind; 4] = [
        NodeKind::AtcClass,
        NodeKind::RxGenericIngredient,
        NodeKind::RxClass,
        NodeKind::CuiHub,
    ];

    pub fn is_rxnorm(self) -> bool {
        matches!(self, NodeKind::RxGenericIngredient | NodeKind::RxClass)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    #[serde(rename = "subclass_of")]
    SubClassOf,
    HasCui,
    IngredientsOf,
    HasForm,
    FormOf,
    PartOf,
    IngredientOf,
    ConsistsOf,
    Constitutes,
    HasTradename,
    PreciseIngredientOf,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 11] = [
        EdgeKind::SubClassOf,
        EdgeKind::HasCui,
        EdgeKind::IngredientsOf,
        EdgeKind::HasForm,
        EdgeKind::FormOf,
        EdgeKind::PartOf,
        EdgeKind::IngredientOf,
        EdgeKind::ConsistsOf,
        EdgeKind::Constitutes,
        EdgeKind::HasTradename,
        EdgeKind::PreciseIngredientOf,
    ];

    /// The nine RxNorm property kinds.
    pub const PROPERTIES: [EdgeKind; 9] = [
        EdgeKind::IngredientsOf,
        EdgeKind::HasForm,
        EdgeKind::FormOf,
        EdgeKind::PartOf,
        EdgeKind::IngredientOf,
        EdgeKind::ConsistsOf,
        EdgeKind::Constitutes,
        EdgeKind::HasTradename,
        EdgeKind::PreciseIngredientOf,
    ];

    pub fn is_property(self) -> bool {
        !matches!(self, EdgeKind::SubClassOf | EdgeKind::HasCui)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::SubClassOf => "subclass_of",
            EdgeKind::HasCui => "has_cui",
            EdgeKind::IngredientsOf => "ingredients_of",
            EdgeKind::HasForm => "has_form",
            EdgeKind::FormOf => "form_of",
            EdgeKind::PartOf => "part_of",
            EdgeKind::IngredientOf => "ingredient_of",
            EdgeKind::ConsistsOf => "consists_of",
            EdgeKind::Constitutes => "constitutes",
            EdgeKind::HasTradename => "has_tradename",
            EdgeKind::PreciseIngredientOf => "precise_ingredient_of",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown edge kind {s:?}"))
    }
}

impl From<RelationType> for EdgeKind {
    fn from(r: RelationType) -> Self {
        match r {
            RelationType::SubclassOf => EdgeKind::SubClassOf,
            RelationType::IngredientsOf => EdgeKind::IngredientsOf,
            RelationType::HasForm => EdgeKind::HasForm,
            RelationType::FormOf => EdgeKind::FormOf,
            RelationType::PartOf => EdgeKind::PartOf,
            RelationType::IngredientOf => EdgeKind::IngredientOf,
            RelationType::ConsistsOf => EdgeKind::ConsistsOf,
            RelationType::Constitutes => EdgeKind::Constitutes,
            RelationType::HasTradename => EdgeKind::HasTradename,
            RelationType::PreciseIngredientOf => EdgeKind::PreciseIngredientOf,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    pub codes: Vec<SourceCode>,
    pub cui: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub rel: EdgeKind,
    pub dst: NodeId,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node} is {found}, expected {expected}")]
    WrongKind {
        node: NodeId,
        expected: &'static str,
        found: NodeKind,
    },
    #[error("invalid node {id}: {detail}")]
    InvalidNode { id: u32, detail: String },
    #[error("edge {src} -{rel}-> {dst} references a missing node")]
    DanglingEdge {
        src: NodeId,
        rel: EdgeKind,
        dst: NodeId,
    },
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("graph document: {0}")]
    Json(#[from] serde_json::Error),
}

/// A structural problem found by [`OdkgGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// A `subclass_of` cycle, listed as the nodes on it.
    SubclassCycle { nodes: Vec<NodeId> },
    /// An edge whose endpoint kinds do not fit its edge kind.
    EdgeEndpoint { edge: Edge, detail: String },
    /// A relation endpoint that has no concept record.
    DanglingRelation {
        src: String,
        rel: String,
        dst: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SubclassCycle { nodes } => {
                let ids: Vec<String> = nodes.iter().map(ToString::to_string).collect();
                write!(f, "subclass_of cycle through nodes {}", ids.join(" -> "))
            }
            Violation::EdgeEndpoint { edge, detail } => {
                write!(
                    f,
                    "edge {} -{}-> {}: {detail}",
                    edge.src, edge.rel, edge.dst
                )
            }
            Violation::DanglingRelation { src, rel, dst } => {
                write!(f, "relation {src} -{rel}-> {dst} has an undefined endpoint")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdkgGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<(EdgeKind, NodeId)>>,
    incoming: Vec<Vec<(EdgeKind, NodeId)>>,
    by_code: HashMap<SourceCode, NodeId>,
    by_cui: HashMap<String, NodeId>,
    seed_ingredients: BTreeSet<NodeId>,
}

impl OdkgGraph {
    pub fn empty() -> Self {
        OdkgGraph::from_parts(Vec::new(), Vec::new()).expect("empty graph is valid")
    }

    /// Freezes a node table and edge list into a graph.
    ///
    /// Node ids must equal their position. Edges are sorted and deduplicated.
    pub fn from_parts(nodes: Vec<Node>, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut by_code = HashMap::new();
        let mut by_cui = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            let invalid = |detail: &str| GraphError::InvalidNode {
                id: n.id.0,
                detail: detail.to_string(),
            };
            if n.id.index() != i {
                return Err(invalid("node ids must be dense and in order"));
            }
            let hub = n.kind == NodeKind::CuiHub;
            if hub != n.codes.is_empty() {
                return Err(invalid("exactly the CUI hub nodes carry no codes"));
            }
            if hub {
                let cui = n
                    .cui
                    .as_ref()
                    .ok_or_else(|| invalid("CUI hub without CUI"))?;
                if by_cui.insert(cui.clone(), n.id).is_some() {
                    return Err(invalid("duplicate CUI hub"));
                }
            }
            for code in &n.codes {
                if by_code.insert(code.clone(), n.id).is_some() {
                    return Err(invalid("code attached to more than one node"));
                }
            }
        }
        for e in &edges {
            if e.src.index() >= nodes.len() || e.dst.index() >= nodes.len() {
                return Err(GraphError::DanglingEdge {
                    src: e.src,
                    rel: e.rel,
                    dst: e.dst,
                });
            }
        }
        edges.sort();
        edges.dedup();

        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut incoming = vec![Vec::new(); nodes.len()];
        for e in &edges {
            outgoing[e.src.index()].push((e.rel, e.dst));
            incoming[e.dst.index()].push((e.rel, e.src));
        }
        let seed_ingredients = nodes
            .iter()
            .filter(|n| n.kind == NodeKind::RxGenericIngredient)
            .map(|n| n.id)
            .collect();
        Ok(OdkgGraph {
            nodes,
            edges,
            outgoing,
            incoming,
            by_code,
            by_cui,
            seed_ingredients,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> Result<&Node, GraphError> {
        self.nodes
            .get(id.index())
            .ok_or(GraphError::UnknownNode(id))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn outgoing(&self, id: NodeId) -> &[(EdgeKind, NodeId)] {
        self.outgoing
            .get(id.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn incoming(&self, id: NodeId) -> &[(EdgeKind, NodeId)] {
        self.incoming
            .get(id.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn node_by_code(&self, code: &SourceCode) -> Option<NodeId> {
        self.by_code.get(code).copied()
    }

    pub fn hub_by_cui(&self, cui: &str) -> Option<NodeId> {
        self.by_cui.get(cui).copied()
    }

    /// Nodes whose label equals `label`. Exact matches win; otherwise the
    /// comparison is case-insensitive.
    pub fn nodes_by_label(&self, label: &str) -> Vec<NodeId> {
        let exact: Vec<NodeId> = self
            .nodes
            .iter()
            .filter(|n| n.label == label)
            .map(|n| n.id)
            .collect();
        if !exact.is_empty() {
            return exact;
        }
        let lower = label.to_lowercase();
        self.nodes
            .iter()
            .filter(|n| n.label.to_lowercase() == lower)
            .map(|n| n.id)
            .collect()
    }

    /// The generic ingredient nodes.
    pub fn seed_ingredients(&self) -> &BTreeSet<NodeId> {
        &self.seed_ingredients
    }

    /// Structural checks: endpoint kinds per edge kind and `subclass_of`
    /// cycles. An empty result means the graph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for e in &self.edges {
            let (s, d) = (
                self.nodes[e.src.index()].kind,
                self.nodes[e.dst.index()].kind,
            );
            let ok = match e.rel {
                EdgeKind::SubClassOf => s == NodeKind::AtcClass && d == NodeKind::AtcClass,
                EdgeKind::HasCui => s != NodeKind::CuiHub && d == NodeKind::CuiHub,
                _ => s.is_rxnorm() && d.is_rxnorm(),
            };
            if !ok {
                out.push(Violation::EdgeEndpoint {
                    edge: *e,
                    detail: format!("{s} -> {d} not allowed for {}", e.rel),
                });
            }
        }
        out.extend(
            self.subclass_cycles()
                .into_iter()
                .map(|nodes| Violation::SubclassCycle { nodes }),
        );
        out
    }

    /// Cycles in the `subclass_of` subgraph, one entry per strongly connected
    /// component with more than one node (or a self loop).
    fn subclass_cycles(&self) -> Vec<Vec<NodeId>> {
        // Iterative Tarjan over SubClassOf edges only.
        let n = self.nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next = 0usize;
        let mut cycles = Vec::new();
        let succ = |v: usize| -> Vec<usize> {
            self.outgoing[v]
                .iter()
                .filter(|(k, _)| *k == EdgeKind::SubClassOf)
                .map(|(_, d)| d.index())
                .collect()
        };
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut work: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some((v, children, pos)) = work.last_mut() {
                let v = *v;
                if *pos < children.len() {
                    let w = children[*pos];
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        let ws = succ(w);
                        work.push((w, ws, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    work.pop();
                    if let Some((parent, _, _)) = work.last() {
                        low[*parent] = low[*parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(NodeId(w as u32));
                            if w == v {
                                break;
                            }
                        }
                        let self_loop = comp.len() == 1 && succ(v).contains(&v);
                        if comp.len() > 1 || self_loop {
                            comp.sort();
                            cycles.push(comp);
                        }
                    }
                }
            }
        }
        cycles.sort();
        cycles
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn atc(id: u32, code: &str) -> Node {
        Node {
            id: NodeId(id),
            kind: NodeKind::AtcClass,
            label: code.to_string(),
            codes: vec![SourceCode::atc(code)],
            cui: None,
        }
    }

    pub(crate) fn rx(id: u32, kind: NodeKind, label: &str) -> Node {
        Node {
            id: NodeId(id),
            kind,
            label: label.to_string(),
            codes: vec![SourceCode::rxnorm(&(1000 + id).to_string())],
            cui: None,
        }
    }

    pub(crate) fn edge(src: u32, rel: EdgeKind, dst: u32) -> Edge {
        Edge {
            src: NodeId(src),
            rel,
            dst: NodeId(dst),
        }
    }

    #[test]
    fn adjacency_matches_edge_list() {
        let nodes = vec![atc(0, "N02A"), atc(1, "N02AA"), atc(2, "N02AB")];
        let edges = vec![
            edge(2, EdgeKind::SubClassOf, 0),
            edge(1, EdgeKind::SubClassOf, 0),
            edge(1, EdgeKind::SubClassOf, 0),
        ];
        let g = OdkgGraph::from_parts(nodes, edges).unwrap();
        assert_eq!(g.edges().len(), 2);
        let mut rebuilt = Vec::new();
        for n in g.nodes() {
            for &(k, d) in g.outgoing(n.id) {
                rebuilt.push(Edge {
                    src: n.id,
                    rel: k,
                    dst: d,
                });
            }
        }
        assert_eq!(rebuilt, g.edges());
        let mut rebuilt_in = Vec::new();
        for n in g.nodes() {
            for &(k, s) in g.incoming(n.id) {
                rebuilt_in.push(Edge {
                    src: s,
                    rel: k,
                    dst: n.id,
                });
            }
        }
        rebuilt_in.sort();
        assert_eq!(rebuilt_in, g.edges());
    }

    #[test]
    fn rejects_bad_parts() {
        let err = OdkgGraph::from_parts(vec![atc(1, "N02A")], vec![]).unwrap_err();
        assert!(matches!(err, GraphError::InvalidNode { .. }));
        let err =
            OdkgGraph::from_parts(vec![atc(0, "N02A")], vec![edge(0, EdgeKind::SubClassOf, 3)])
                .unwrap_err();
        assert!(matches!(err, GraphError::DanglingEdge { .. }));
        let hub_with_code = Node {
            kind: NodeKind::CuiHub,
            ..atc(0, "N02A")
        };
        assert!(OdkgGraph::from_parts(vec![hub_with_code], vec![]).is_err());
    }

    #[test]
    fn validation_flags_cycles_and_kinds() {
        let nodes = vec![
            atc(0, "X1"),
            atc(1, "X2"),
            rx(2, NodeKind::RxClass, "Thing"),
        ];
        let edges = vec![
            edge(0, EdgeKind::SubClassOf, 1),
            edge(1, EdgeKind::SubClassOf, 0),
            edge(0, EdgeKind::HasForm, 2),
        ];
        let g = OdkgGraph::from_parts(nodes, edges).unwrap();
        let v = g.validate();
        assert_eq!(v.len(), 2);
        assert!(v.contains(&Violation::SubclassCycle {
            nodes: vec![NodeId(0), NodeId(1)]
        }));
        assert!(matches!(v[0], Violation::EdgeEndpoint { .. }));
    }

    #[test]
    fn edge_kind_names() {
        for k in EdgeKind::ALL {
            assert_eq!(k.as_str().parse::<EdgeKind>().unwrap(), k);
            assert_eq!(
                serde_json::to_string(&k).unwrap(),
                format!("\"{}\"", k.as_str())
            );
        }
    }
}
