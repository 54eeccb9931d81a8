use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Edge, GraphError, Node, OdkgGraph};

/// The on-disk form of a graph: nodes by id, edges sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl OdkgGraph {
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            nodes: self.nodes().to_vec(),
            edges: self.edges().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(s)?;
        OdkgGraph::from_parts(doc.nodes, doc.edges)
    }
}

pub fn export_graph(graph: &OdkgGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let path = path.as_ref();
    let mut bytes = graph.to_json();
    bytes.push('\n');
    fs::write(path, bytes).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn import_graph(path: impl AsRef<Path>) -> Result<OdkgGraph, GraphError> {
    let path = path.as_ref();
    let s = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    OdkgGraph::from_json(&s)
}
