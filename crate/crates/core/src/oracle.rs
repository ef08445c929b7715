//! Brute-force ground truth for small graphs.
//!
//! The Pareto front is enumerated over vertex sets: interference depends on
//! the vertices alone, and the cheapest tree on a fixed vertex set `W` is a
//! minimum spanning tree of the induced subgraph `G[W]`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::error::{MistError, Result};
use crate::graph::{Edge, Graph, NodeId};
use crate::interference::{interference, vicinal_le, Counterexample};
use crate::nodeset::NodeSet;
use crate::paths::{Path, ShortestDag, TIE_EPSILON};
use crate::steiner::{terminals_of, Algorithm, EdgeReport, MulticastRequest, SteinerTreeResult};

pub const DEFAULT_NODE_CAP: usize = 16;

/// Hard ceiling on `node_cap`; 2^24 subsets is already minutes of work.
pub const MAX_NODE_CAP: usize = 24;

/// One non-dominated (length, interference) pair with a tree attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPoint {
    pub length: f64,
    pub interference: usize,
    pub witness_vertices: NodeSet,
    /// Sorted by (u, v).
    pub witness_edges: Vec<Edge>,
}

impl ParetoPoint {
    pub fn to_tree(&self, g: &Graph, root: NodeId) -> Result<SteinerTreeResult> {
        SteinerTreeResult::from_edges(g, Algorithm::Exact, root, self.witness_edges.clone(), Vec::new())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParetoPointReport {
    pub length: f64,
    pub interference: usize,
    pub witness_vertices: Vec<String>,
    pub witness_edges: Vec<EdgeReport>,
}

pub fn front_report(g: &Graph, front: &[ParetoPoint]) -> Vec<ParetoPointReport> {
    front
        .iter()
        .map(|p| ParetoPointReport {
            length: p.length,
            interference: p.interference,
            witness_vertices: g.ids(p.witness_vertices.iter()),
            witness_edges: p
                .witness_edges
                .iter()
                .map(|e| EdgeReport {
                    u: g.id(e.u).to_string(),
                    v: g.id(e.v).to_string(),
                    length: e.length,
                })
                .collect(),
        })
        .collect()
}

/// CSV with columns `length,interference,witness_vertices`; vertices are
/// space-separated.
pub fn front_to_csv(g: &Graph, front: &[ParetoPoint]) -> String {
    let mut out = String::from("length,interference,witness_vertices\n");
    for p in front {
        out.push_str(&format!(
            "{},{},{}\n",
            p.length,
            p.interference,
            g.ids(p.witness_vertices.iter()).join(" ")
        ));
    }
    out
}

struct Candidate {
    mask: u64,
    length: f64,
    interference: usize,
}

/// Minimum spanning tree of `G[mask]` by (length, u, v), or `None` when the
/// induced subgraph is disconnected. Edges come back sorted by (u, v).
fn induced_mst(g: &Graph, sorted_edges: &[Edge], mask: u64) -> Option<(f64, Vec<Edge>)> {
    let k = mask.count_ones() as usize;
    let mut dsu = DisjointSets::new(g.node_count());
    let mut chosen = Vec::with_capacity(k.saturating_sub(1));
    for e in sorted_edges {
        if mask >> e.u.0 & 1 == 1 && mask >> e.v.0 & 1 == 1 && dsu.union(e.u.0, e.v.0) {
            chosen.push(*e);
            if chosen.len() + 1 == k {
                break;
            }
        }
    }
    if chosen.len() + 1 != k {
        return None;
    }
    // summed in (u, v) order so the value matches a rebuilt tree bit for bit
    chosen.sort_by_key(|e| (e.u, e.v));
    Some((chosen.iter().fold(0.0, |acc, e| acc + e.length), chosen))
}

fn connected(adj: &[u64], mask: u64) -> bool {
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & mask & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == mask
}

fn sorted_edges(g: &Graph) -> Vec<Edge> {
    let mut es = g.edges().to_vec();
    es.sort_by(|x, y| x.length.total_cmp(&y.length).then((x.u, x.v).cmp(&(y.u, y.v))));
    es
}

/// The exact bicriteria front for `req`, sorted by increasing length (and
/// so strictly decreasing interference).
///
/// For each interference value only the shortest vertex set survives, ties
/// going to the numerically smaller vertex mask; lengths within the tie
/// tolerance of a lower-interference point count as dominated.
pub fn enumerate_pareto_front(g: &Graph, req: &MulticastRequest, node_cap: usize) -> Result<Vec<ParetoPoint>> {
    if node_cap > MAX_NODE_CAP {
        return Err(MistError::InvalidArgument(format!(
            "node cap {node_cap} is above the supported maximum of {MAX_NODE_CAP}"
        )));
    }
    let n = g.node_count();
    if n > node_cap {
        return Err(MistError::NodeCapExceeded {
            nodes: n,
            cap: node_cap,
        });
    }
    let s = terminals_of(g, req)?;
    let root = g.node(&req.root)?;

    let adj: Vec<u64> = g
        .nodes()
        .map(|v| g.adjacent(v).iter().fold(0u64, |m, &(w, _)| m | 1 << w.0))
        .collect();
    let closed: Vec<u64> = g.nodes().map(|v| adj[v.0] | 1 << v.0).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let s_mask = s.iter().fold(0u64, |m, v| m | 1 << v.0);

    // the terminals must share one component of the whole graph
    let mut reach = 1u64 << root.0;
    let mut frontier = reach;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & all & !reach;
        reach |= fresh;
        frontier |= fresh;
    }
    if let Some(t) = s.iter().find(|t| reach >> t.0 & 1 == 0) {
        return Err(MistError::Unreachable {
            source_node: req.root.clone(),
            target: g.id(t).to_string(),
        });
    }

    let es = sorted_edges(g);
    let free = all & !s_mask;
    let free_bits: Vec<usize> = (0..n).filter(|i| free >> i & 1 == 1).collect();
    let candidates: Vec<Candidate> = (0u64..1 << free_bits.len())
        .into_par_iter()
        .filter_map(|sub| {
            let mask = free_bits
                .iter()
                .enumerate()
                .filter(|(j, _)| sub >> j & 1 == 1)
                .fold(s_mask, |m, (_, &b)| m | 1 << b);
            if !connected(&adj, mask) {
                return None;
            }
            let (length, _) = induced_mst(g, &es, mask)?;
            let mut nbhd = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                nbhd |= closed[v];
            }
            Some(Candidate {
                mask,
                length,
                interference: nbhd.count_ones() as usize,
            })
        })
        .collect();

    let mut best: BTreeMap<usize, (f64, u64)> = BTreeMap::new();
    for c in candidates {
        best.entry(c.interference)
            .and_modify(|cur| {
                if c.length.total_cmp(&cur.0).then(c.mask.cmp(&cur.1)).is_lt() {
                    *cur = (c.length, c.mask);
                }
            })
            .or_insert((c.length, c.mask));
    }

    let mut front = Vec::new();
    let mut shortest = f64::INFINITY;
    for (&interference, &(length, mask)) in &best {
        if length < shortest - TIE_EPSILON {
            shortest = length;
            let (_, witness_edges) = induced_mst(g, &es, mask).expect("candidate was connected");
            front.push(ParetoPoint {
                length,
                interference,
                witness_vertices: NodeSet::from_mask(n, mask),
                witness_edges,
            });
        }
    }
    front.reverse();
    if front.is_empty() {
        return Err(MistError::EmptyFront);
    }
    Ok(front)
}

/// Minimum-length multicast tree; interference breaks length ties.
pub fn exact_min_length_tree(g: &Graph, req: &MulticastRequest, node_cap: usize) -> Result<SteinerTreeResult> {
    let front = enumerate_pareto_front(g, req, node_cap)?;
    front[0].to_tree(g, g.node(&req.root)?)
}

/// Outcome of enumerating every shortest s-t path.
#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustivePath {
    pub length: f64,
    pub interference: usize,
    /// The first minimum-interference path in lexicographic order.
    pub path: Path,
    pub paths_seen: usize,
}

pub fn exhaustive_min_interference_sp(g: &Graph, s: NodeId, t: NodeId) -> Result<ExhaustivePath> {
    let dag = ShortestDag::build(g, s, t, TIE_EPSILON)?;
    let mut best: Option<(usize, f64, Vec<NodeId>)> = None;
    let mut seen = 0;
    dag.for_each_path(|nodes, length| {
        seen += 1;
        let size = interference(g, &g.set_of(nodes.iter().copied())).expect("path nodes belong to g");
        if best.as_ref().is_none_or(|b| size < b.0) {
            best = Some((size, length, nodes.to_vec()));
        }
        true
    });
    let (interference, length, nodes) = best.expect("a reachable target has a shortest path");
    Ok(ExhaustivePath {
        length,
        interference,
        path: Path { nodes, length },
        paths_seen: seen,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontComparison {
    pub min_length: f64,
    pub min_interference: usize,
    pub length_ratio: f64,
    pub interference_ratio: f64,
    /// Set when the length ratio exceeds 2 (beyond tolerance).
    pub flagged: bool,
}

fn ratio(x: f64, best: f64) -> f64 {
    if best == 0.0 {
        if x == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        x / best
    }
}

pub fn verify_tree_against_front(front: &[ParetoPoint], result: &SteinerTreeResult) -> Result<FrontComparison> {
    let min_length = front.iter().map(|p| p.length).fold(f64::INFINITY, f64::min);
    let min_interference = front
        .iter()
        .map(|p| p.interference)
        .min()
        .ok_or(MistError::EmptyFront)?;
    let length_ratio = ratio(result.total_length, min_length);
    Ok(FrontComparison {
        min_length,
        min_interference,
        length_ratio,
        interference_ratio: result.interference as f64 / min_interference as f64,
        flagged: result.total_length > 2.0 * min_length + TIE_EPSILON,
    })
}

/// Vertices outside `N[W]` that some member of `W` is vicinally below.
///
/// For a connected `W` with at least two vertices this is always empty: a
/// tree neighbour of `v'` lies in `N(v') ⊆ N[v]`, which pulls `v` into
/// `N[W]`. A lone vertex has no such neighbour, so single-vertex sets are
/// skipped.
pub fn vicinal_violations(g: &Graph, w: &NodeSet) -> Vec<Counterexample> {
    if w.len() < 2 {
        return Vec::new();
    }
    let nbhd = crate::interference::closed_neighborhood(g, w).expect("set sized for g");
    let mut out = Vec::new();
    for v in g.nodes().filter(|&v| !nbhd.contains(v)) {
        for u in w.iter() {
            if vicinal_le(g, u, v) {
                out.push(Counterexample::Vicinal {
                    tree_vertices: g.ids(w.iter()),
                    outside: g.id(v).to_string(),
                    dominated_by: g.id(u).to_string(),
                });
            }
        }
    }
    out
}
