//! JSON graph files.
//!
//! ```json
//! {
//!   "nodes": [{"id": "N1", "function": "F1", "x": 0.1, "y": 0.4}, {"id": "N2"}],
//!   "edges": [{"u": "N1", "v": "N2", "length": 1.0}]
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MistError, Result};
use crate::graph::{Graph, GraphBuilder};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub length: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Default)]
pub struct GraphFile {
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for n in self.nodes {
            b.node_full(n.id, n.function, n.x, n.y);
        }
        for e in self.edges {
            b.edge(e.u, e.v, e.length);
        }
        b.build()
    }

    pub fn from_graph(g: &Graph) -> GraphFile {
        GraphFile {
            nodes: g
                .nodes()
                .map(|v| {
                    let (x, y) = g.position(v);
                    NodeRecord {
                        id: g.id(v).to_string(),
                        function: g.function(v).map(str::to_string),
                        x,
                        y,
                    }
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: g.id(e.u).to_string(),
                    v: g.id(e.v).to_string(),
                    length: e.length,
                })
                .collect(),
        }
    }
}

pub fn load_graph(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| MistError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_graph()
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(g)).expect("graph serializes")
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    load_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, graph_to_json(g) + "\n")?;
    Ok(())
}
