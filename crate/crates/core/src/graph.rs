//! The wireless mesh graph: nodes with optional function labels, undirected
//! weighted links, and precomputed closed neighborhoods.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MistError, Result};
use crate::nodeset::NodeSet;

/// Dense node index. Indices follow the lexicographic order of the node id
/// strings, so comparing index sequences compares id sequences.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Undirected edge stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub length: f64,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
struct NodeData {
    id: String,
    function: Option<String>,
    x: Option<f64>,
    y: Option<f64>,
}

/// Immutable undirected graph. Construct through [`GraphBuilder`] or
/// [`crate::io::load_graph`].
#[derive(Clone, PartialEq, Debug)]
pub struct Graph {
    nodes: Vec<NodeData>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    closed: Vec<NodeSet>,
    by_id: HashMap<String, NodeId>,
    by_function: HashMap<String, NodeId>,
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id(&self, v: NodeId) -> &str {
        &self.nodes[v.0].id
    }

    pub fn ids<'a>(&'a self, vs: impl IntoIterator<Item = NodeId> + 'a) -> Vec<String> {
        vs.into_iter().map(|v| self.id(v).to_string()).collect()
    }

    pub fn function(&self, v: NodeId) -> Option<&str> {
        self.nodes[v.0].function.as_deref()
    }

    pub fn position(&self, v: NodeId) -> (Option<f64>, Option<f64>) {
        (self.nodes[v.0].x, self.nodes[v.0].y)
    }

    pub fn node(&self, id: &str) -> Result<NodeId> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| MistError::UnknownNode(id.to_string()))
    }

    pub fn host_of(&self, function: &str) -> Result<NodeId> {
        self.by_function
            .get(function)
            .copied()
            .ok_or_else(|| MistError::UnknownFunction(function.to_string()))
    }

    pub fn check(&self, v: NodeId) -> Result<()> {
        if v.0 < self.nodes.len() {
            Ok(())
        } else {
            Err(MistError::NodeOutOfRange(v.0))
        }
    }

    /// Adjacent nodes with link lengths, sorted by neighbor index.
    pub fn adjacent(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn edge_length(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.adjacency[u.0]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adjacency[u.0][i].1)
    }

    /// Open neighborhood N(v).
    pub fn neighbors(&self, v: NodeId) -> Result<NodeSet> {
        self.check(v)?;
        Ok(NodeSet::from_nodes(
            self.node_count(),
            self.adjacency[v.0].iter().map(|&(w, _)| w),
        ))
    }

    /// Closed neighborhood N[v] = N(v) ∪ {v}, precomputed.
    pub fn closed_neighbors(&self, v: NodeId) -> &NodeSet {
        &self.closed[v.0]
    }

    pub fn empty_set(&self) -> NodeSet {
        NodeSet::new(self.node_count())
    }

    pub fn set_of<I: IntoIterator<Item = NodeId>>(&self, nodes: I) -> NodeSet {
        NodeSet::from_nodes(self.node_count(), nodes)
    }

    /// Resolves node id strings into a set.
    pub fn set_by_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<NodeSet> {
        let mut s = self.empty_set();
        for id in ids {
            s.insert(self.node(id.as_ref())?);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug)]
struct PendingNode {
    data: NodeData,
    element: String,
}

#[derive(Clone, Debug)]
struct PendingEdge {
    u: String,
    v: String,
    length: f64,
    element: String,
}

/// Collects nodes and edges, validating every graph invariant in `build`.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<PendingNode>,
    edges: Vec<PendingEdge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, id: impl Into<String>) -> &mut Self {
        self.node_full(id, None::<String>, None, None)
    }

    pub fn node_with_function(&mut self, id: impl Into<String>, function: impl Into<String>) -> &mut Self {
        self.node_full(id, Some(function), None, None)
    }

    pub fn node_full(
        &mut self,
        id: impl Into<String>,
        function: Option<impl Into<String>>,
        x: Option<f64>,
        y: Option<f64>,
    ) -> &mut Self {
        let element = format!("nodes[{}]", self.nodes.len());
        self.nodes.push(PendingNode {
            data: NodeData {
                id: id.into(),
                function: function.map(Into::into),
                x,
                y,
            },
            element,
        });
        self
    }

    pub fn edge(&mut self, u: impl Into<String>, v: impl Into<String>, length: f64) -> &mut Self {
        let element = format!("edges[{}]", self.edges.len());
        self.edges.push(PendingEdge {
            u: u.into(),
            v: v.into(),
            length,
            element,
        });
        self
    }

    pub fn build(&self) -> Result<Graph> {
        let mut pending = self.nodes.clone();
        {
            let mut seen: HashMap<&str, &str> = HashMap::new();
            for p in &pending {
                if seen.insert(&p.data.id, &p.element).is_some() {
                    return Err(MistError::DuplicateNode {
                        element: p.element.clone(),
                        id: p.data.id.clone(),
                    });
                }
            }
        }
        {
            let mut hosts: HashMap<&str, &str> = HashMap::new();
            for p in &pending {
                if let Some(f) = &p.data.function {
                    if let Some(first) = hosts.insert(f, &p.data.id) {
                        return Err(MistError::DuplicateFunction {
                            element: p.element.clone(),
                            function: f.clone(),
                            first: first.to_string(),
                        });
                    }
                }
            }
        }
        pending.sort_by(|a, b| a.data.id.cmp(&b.data.id));
        let nodes: Vec<NodeData> = pending.into_iter().map(|p| p.data).collect();
        let n = nodes.len();
        let by_id: HashMap<String, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id.clone(), NodeId(i)))
            .collect();
        let by_function: HashMap<String, NodeId> = nodes
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.function.clone().map(|f| (f, NodeId(i))))
            .collect();

        let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let lookup = |id: &str| {
                by_id.get(id).copied().ok_or_else(|| MistError::UnknownEdgeEndpoint {
                    element: e.element.clone(),
                    id: id.to_string(),
                })
            };
            let (a, b) = (lookup(&e.u)?, lookup(&e.v)?);
            if a == b {
                return Err(MistError::SelfLoop {
                    element: e.element.clone(),
                    id: e.u.clone(),
                });
            }
            if !(e.length.is_finite() && e.length >= 0.0) {
                return Err(MistError::InvalidLength {
                    element: e.element.clone(),
                    length: e.length,
                });
            }
            if adjacency[a.0].iter().any(|&(w, _)| w == b) {
                return Err(MistError::ParallelEdge {
                    element: e.element.clone(),
                    u: e.u.clone(),
                    v: e.v.clone(),
                });
            }
            adjacency[a.0].push((b, e.length));
            adjacency[b.0].push((a, e.length));
            edges.push(Edge {
                u: a.min(b),
                v: a.max(b),
                length: e.length,
            });
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(w, _)| w);
        }
        let closed = (0..n)
            .map(|i| {
                let mut s = NodeSet::new(n);
                s.insert(NodeId(i));
                for &(w, _) in &adjacency[i] {
                    s.insert(w);
                }
                s
            })
            .collect();

        Ok(Graph {
            nodes,
            edges,
            adjacency,
            closed,
            by_id,
            by_function,
        })
    }
}
