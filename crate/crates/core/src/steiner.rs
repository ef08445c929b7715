//! Multicast tree construction.
//!
//! [`tssr`] runs two stages: every terminal pair is joined by a
//! minimum-interference shortest path, then a minimum spanning tree of that
//! metric closure is expanded back into the graph (union of witness paths,
//! spanning tree of the union, pruning of non-terminal leaves). The baselines
//! [`spt_baseline`] and [`st_baseline`] build the same kind of tree while
//! ignoring interference.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{MistError, Result};
use crate::graph::{Edge, Graph, NodeId};
use crate::interference::interference;
use crate::nodeset::NodeSet;
use crate::pareto_path::{min_interference_shortest_path, ModeUsed, PathSolverConfig};
use crate::paths::{plain_shortest_path, Path, ShortestPathTree, TIE_EPSILON};

/// A multicast session: the sender plus the functions it must reach.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticastRequest {
    pub root: String,
    pub functions: Vec<String>,
}

impl MulticastRequest {
    /// Duplicate function names are dropped, keeping first occurrences.
    pub fn new<S: Into<String>>(root: impl Into<String>, functions: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut fs: Vec<String> = Vec::new();
        for f in functions {
            let f = f.into();
            if !fs.contains(&f) {
                fs.push(f);
            }
        }
        if fs.is_empty() {
            return Err(MistError::EmptyRequest);
        }
        Ok(MulticastRequest {
            root: root.into(),
            functions: fs,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(alias = "TSSR")]
    Tssr,
    #[serde(alias = "SPT")]
    Spt,
    #[serde(alias = "ST")]
    St,
    #[serde(alias = "EXACT")]
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tssr => "tssr",
            Algorithm::Spt => "spt",
            Algorithm::St => "st",
            Algorithm::Exact => "exact",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Tssr => "TSSR",
            Algorithm::Spt => "SPT",
            Algorithm::St => "ST",
            Algorithm::Exact => "EXACT",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = MistError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tssr" => Ok(Algorithm::Tssr),
            "spt" => Ok(Algorithm::Spt),
            "st" => Ok(Algorithm::St),
            "exact" => Ok(Algorithm::Exact),
            _ => Err(MistError::InvalidArgument(format!("unknown algorithm {s:?}"))),
        }
    }
}

/// How a closure witness path was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Exact,
    Greedy,
    Plain,
}

impl From<ModeUsed> for WitnessKind {
    fn from(m: ModeUsed) -> Self {
        match m {
            ModeUsed::Exact => WitnessKind::Exact,
            ModeUsed::Greedy => WitnessKind::Greedy,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureEntry {
    pub a: NodeId,
    pub b: NodeId,
    pub length: f64,
    pub path: Path,
    pub interference: usize,
    pub kind: WitnessKind,
}

/// Complete graph on the terminals; each pair carries a witness path.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricClosure {
    pub terminals: Vec<NodeId>,
    /// One entry per unordered pair, ordered by (a, b) with a < b.
    pub entries: Vec<ClosureEntry>,
    pub epsilon: f64,
}

/// Tie-break applied between closure edges of equal length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureTieBreak {
    /// Lower witness interference first, then pair ids.
    Interference,
    /// Pair ids only.
    PairId,
}

pub fn terminals_of(g: &Graph, req: &MulticastRequest) -> Result<NodeSet> {
    if req.functions.is_empty() {
        return Err(MistError::EmptyRequest);
    }
    let mut s = g.empty_set();
    s.insert(g.node(&req.root)?);
    for f in &req.functions {
        s.insert(g.host_of(f)?);
    }
    Ok(s)
}

fn pairs(terminals: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for (i, &a) in terminals.iter().enumerate() {
        for &b in &terminals[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// Stage one: a minimum-interference shortest path for every terminal pair.
/// Pairs are solved in parallel; the result does not depend on scheduling.
pub fn metric_closure(g: &Graph, s: &NodeSet, cfg: &PathSolverConfig) -> Result<MetricClosure> {
    cfg.validate()?;
    let terminals = s.to_vec();
    let entries = pairs(&terminals)
        .into_par_iter()
        .map(|(a, b)| {
            let sol = min_interference_shortest_path(g, a, b, cfg)?;
            Ok(ClosureEntry {
                a,
                b,
                length: sol.path.length,
                interference: sol.interference,
                path: sol.path,
                kind: sol.mode.into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricClosure {
        terminals,
        entries,
        epsilon: cfg.tie_epsilon,
    })
}

/// Closure built from interference-oblivious shortest paths.
pub fn plain_metric_closure(g: &Graph, s: &NodeSet) -> Result<MetricClosure> {
    let terminals = s.to_vec();
    let entries = pairs(&terminals)
        .into_par_iter()
        .map(|(a, b)| {
            let path = plain_shortest_path(g, a, b)?;
            Ok(ClosureEntry {
                a,
                b,
                length: path.length,
                interference: interference(g, &path.vertex_set(g))?,
                path,
                kind: WitnessKind::Plain,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricClosure {
        terminals,
        entries,
        epsilon: TIE_EPSILON,
    })
}

fn closure_order(x: &ClosureEntry, y: &ClosureEntry, eps: f64, tie: ClosureTieBreak) -> Ordering {
    if (x.length - y.length).abs() > eps {
        return x.length.total_cmp(&y.length);
    }
    let by_interference = match tie {
        ClosureTieBreak::Interference => x.interference.cmp(&y.interference),
        ClosureTieBreak::PairId => Ordering::Equal,
    };
    by_interference.then_with(|| (x.a, x.b).cmp(&(y.a, y.b)))
}

/// Kruskal over the closure, returning indices into `mc.entries`.
///
/// Lengths within the closure's tolerance count as equal, so the cheapest
/// remaining edge is found by a linear scan rather than a sort.
pub fn minimum_spanning_tree_by(mc: &MetricClosure, tie: ClosureTieBreak) -> Vec<usize> {
    let k = mc.terminals.len();
    let slot = |v: NodeId| mc.terminals.binary_search(&v).expect("closure endpoint is a terminal");
    let mut dsu = DisjointSets::new(k);
    let mut used = vec![false; mc.entries.len()];
    let mut chosen = Vec::with_capacity(k.saturating_sub(1));
    while chosen.len() + 1 < k {
        let mut best: Option<usize> = None;
        for (i, e) in mc.entries.iter().enumerate() {
            if used[i] || dsu.find(slot(e.a)) == dsu.find(slot(e.b)) {
                continue;
            }
            if best.is_none_or(|b| closure_order(e, &mc.entries[b], mc.epsilon, tie) == Ordering::Less) {
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        used[i] = true;
        dsu.union(slot(mc.entries[i].a), slot(mc.entries[i].b));
        chosen.push(i);
    }
    chosen.sort_unstable();
    chosen
}

/// Minimum-length spanning tree of the closure; equal lengths prefer lower
/// witness interference, then smaller pair ids.
pub fn minimum_spanning_tree(mc: &MetricClosure) -> Vec<usize> {
    minimum_spanning_tree_by(mc, ClosureTieBreak::Interference)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub a: String,
    pub b: String,
    pub length: f64,
    pub interference: usize,
    pub path: Vec<String>,
    pub mode: WitnessKind,
    pub in_tree: bool,
}

/// A rooted multicast tree with both objective values.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinerTreeResult {
    pub algorithm: Algorithm,
    pub root: NodeId,
    pub vertices: NodeSet,
    /// Sorted by (u, v).
    pub edges: Vec<Edge>,
    pub total_length: f64,
    pub interference: usize,
    pub witnesses: Vec<WitnessRecord>,
}

impl SteinerTreeResult {
    /// Builds a result from tree edges, recomputing both metrics.
    pub fn from_edges(
        g: &Graph,
        algorithm: Algorithm,
        root: NodeId,
        mut edges: Vec<Edge>,
        witnesses: Vec<WitnessRecord>,
    ) -> Result<Self> {
        edges.sort_by_key(|e| (e.u, e.v));
        edges.dedup_by_key(|e| (e.u, e.v));
        let mut vertices = g.set_of([root]);
        for e in &edges {
            vertices.insert(e.u);
            vertices.insert(e.v);
        }
        Ok(SteinerTreeResult {
            algorithm,
            root,
            total_length: edges.iter().fold(0.0, |acc, e| acc + e.length),
            interference: interference(g, &vertices)?,
            vertices,
            edges,
            witnesses,
        })
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    /// Checks the tree invariants: connected and acyclic over `vertices`,
    /// spans `terminals` and the root, metrics consistent with the vertex
    /// set, and every non-root leaf is a terminal.
    pub fn validate(&self, g: &Graph, terminals: &NodeSet) -> std::result::Result<(), String> {
        let n = g.node_count();
        if !self.vertices.contains(self.root) {
            return Err("root missing from tree".into());
        }
        if !terminals.is_subset(&self.vertices) {
            return Err("tree does not span all terminals".into());
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return Err(format!(
                "{} edges over {} vertices is not a tree",
                self.edges.len(),
                self.vertices.len()
            ));
        }
        let mut dsu = DisjointSets::new(n);
        let mut degree = vec![0usize; n];
        let mut length = 0.0;
        for e in &self.edges {
            if !(self.vertices.contains(e.u) && self.vertices.contains(e.v)) {
                return Err("edge endpoint outside the vertex set".into());
            }
            match g.edge_length(e.u, e.v) {
                Some(l) if l == e.length => {}
                _ => return Err(format!("{}-{} is not a graph edge", g.id(e.u), g.id(e.v))),
            }
            if !dsu.union(e.u.0, e.v.0) {
                return Err("tree contains a cycle".into());
            }
            degree[e.u.0] += 1;
            degree[e.v.0] += 1;
            length += e.length;
        }
        if (length - self.total_length).abs() > 1e-9 * (1.0 + length.abs()) {
            return Err(format!("total_length {} but edges sum to {length}", self.total_length));
        }
        let reach = interference(g, &self.vertices).map_err(|e| e.to_string())?;
        if reach != self.interference {
            return Err(format!("interference {} but |N[V_T]| = {reach}", self.interference));
        }
        for v in self.vertices.iter() {
            if v != self.root && degree[v.0] == 1 && !terminals.contains(v) {
                return Err(format!("non-terminal leaf {}", g.id(v)));
            }
        }
        Ok(())
    }

    /// Tree-path length from the root to every vertex.
    pub fn root_distances(&self, g: &Graph) -> Vec<f64> {
        let n = g.node_count();
        let mut adj: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.u.0].push((e.v, e.length));
            adj[e.v.0].push((e.u, e.length));
        }
        let mut dist = vec![f64::INFINITY; n];
        dist[self.root.0] = 0.0;
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            for &(w, l) in &adj[u.0] {
                if dist[w.0].is_infinite() {
                    dist[w.0] = dist[u.0] + l;
                    stack.push(w);
                }
            }
        }
        dist
    }

    pub fn report(&self, g: &Graph) -> TreeReport {
        TreeReport {
            algorithm: self.algorithm.tag().to_string(),
            root: g.id(self.root).to_string(),
            vertices: g.ids(self.vertices.iter()),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeReport {
                    u: g.id(e.u).to_string(),
                    v: g.id(e.v).to_string(),
                    length: e.length,
                })
                .collect(),
            total_length: self.total_length,
            interference: self.interference,
            witnesses: self.witnesses.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub u: String,
    pub v: String,
    pub length: f64,
}

/// Serialized form of a [`SteinerTreeResult`], with node ids as strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeReport {
    pub algorithm: String,
    pub root: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeReport>,
    pub total_length: f64,
    pub interference: usize,
    pub witnesses: Vec<WitnessRecord>,
}

fn witness_records(g: &Graph, mc: &MetricClosure, mst: &[usize]) -> Vec<WitnessRecord> {
    mc.entries
        .iter()
        .enumerate()
        .map(|(i, e)| WitnessRecord {
            a: g.id(e.a).to_string(),
            b: g.id(e.b).to_string(),
            length: e.length,
            interference: e.interference,
            path: e.path.ids(g),
            mode: e.kind,
            in_tree: mst.contains(&i),
        })
        .collect()
}

/// Repeatedly strips leaves that are neither terminals nor the root, then
/// recomputes both metrics.
pub fn prune_non_terminal_leaves(g: &Graph, tree: &SteinerTreeResult, s: &NodeSet) -> Result<SteinerTreeResult> {
    let n = g.node_count();
    let mut alive: Vec<bool> = vec![true; tree.edges.len()];
    let mut degree = vec![0usize; n];
    for e in &tree.edges {
        degree[e.u.0] += 1;
        degree[e.v.0] += 1;
    }
    let keep = |v: NodeId| v == tree.root || s.contains(v);
    let mut leaves: Vec<NodeId> = tree.vertices.iter().filter(|&v| degree[v.0] == 1 && !keep(v)).collect();
    while let Some(leaf) = leaves.pop() {
        if degree[leaf.0] != 1 {
            continue;
        }
        let (i, e) = tree
            .edges
            .iter()
            .enumerate()
            .find(|(i, e)| alive[*i] && (e.u == leaf || e.v == leaf))
            .expect("a leaf has one live edge");
        alive[i] = false;
        degree[leaf.0] = 0;
        let other = e.other(leaf);
        degree[other.0] -= 1;
        if degree[other.0] == 1 && !keep(other) {
            leaves.push(other);
        }
    }
    let edges = tree
        .edges
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(e, _)| *e)
        .collect();
    SteinerTreeResult::from_edges(g, tree.algorithm, tree.root, edges, tree.witnesses.clone())
}

/// Expands a closure spanning tree into the graph: union of the chosen
/// witness paths, minimum spanning tree of that union (ties by node ids),
/// then leaf pruning.
pub fn kmb_expand(
    g: &Graph,
    mc: &MetricClosure,
    mst_edges: &[usize],
    s: &NodeSet,
    root: NodeId,
) -> Result<SteinerTreeResult> {
    let mut union: Vec<Edge> = Vec::new();
    for &i in mst_edges {
        for (u, v) in mc.entries[i].path.edges() {
            let length = g.edge_length(u, v).expect("witness paths follow graph edges");
            union.push(Edge {
                u: u.min(v),
                v: u.max(v),
                length,
            });
        }
    }
    union.sort_by(|x, y| x.length.total_cmp(&y.length).then((x.u, x.v).cmp(&(y.u, y.v))));
    union.dedup_by_key(|e| (e.u, e.v));
    let mut dsu = DisjointSets::new(g.node_count());
    let tree_edges: Vec<Edge> = union.into_iter().filter(|e| dsu.union(e.u.0, e.v.0)).collect();
    let spanning =
        SteinerTreeResult::from_edges(g, Algorithm::Tssr, root, tree_edges, witness_records(g, mc, mst_edges))?;
    prune_non_terminal_leaves(g, &spanning, s)
}

fn single_vertex(g: &Graph, algorithm: Algorithm, root: NodeId) -> Result<SteinerTreeResult> {
    SteinerTreeResult::from_edges(g, algorithm, root, Vec::new(), Vec::new())
}

/// Two-stage interference-aware multicast tree.
pub fn tssr(g: &Graph, req: &MulticastRequest, cfg: &PathSolverConfig) -> Result<SteinerTreeResult> {
    let s = terminals_of(g, req)?;
    let root = g.node(&req.root)?;
    if s.len() == 1 {
        return single_vertex(g, Algorithm::Tssr, root);
    }
    let mc = metric_closure(g, &s, cfg)?;
    let mst = minimum_spanning_tree(&mc);
    Ok(kmb_expand(g, &mc, &mst, &s, root)?.with_algorithm(Algorithm::Tssr))
}

/// Interference-oblivious Steiner tree: the same closure pipeline fed with
/// plain shortest paths and length-only spanning tree ties.
pub fn st_baseline(g: &Graph, req: &MulticastRequest) -> Result<SteinerTreeResult> {
    let s = terminals_of(g, req)?;
    let root = g.node(&req.root)?;
    if s.len() == 1 {
        return single_vertex(g, Algorithm::St, root);
    }
    let mc = plain_metric_closure(g, &s)?;
    let mst = minimum_spanning_tree_by(&mc, ClosureTieBreak::PairId);
    Ok(kmb_expand(g, &mc, &mst, &s, root)?.with_algorithm(Algorithm::St))
}

/// Shortest-path tree from the root, restricted to the terminals.
pub fn spt_baseline(g: &Graph, req: &MulticastRequest) -> Result<SteinerTreeResult> {
    let s = terminals_of(g, req)?;
    let root = g.node(&req.root)?;
    let spt = ShortestPathTree::build(g, root)?;
    let mut edges = Vec::new();
    for t in s.iter() {
        let p = spt.path_to(g, t)?;
        for (u, v) in p.edges() {
            edges.push(Edge {
                u: u.min(v),
                v: u.max(v),
                length: g.edge_length(u, v).expect("tree paths follow graph edges"),
            });
        }
    }
    let tree = SteinerTreeResult::from_edges(g, Algorithm::Spt, root, edges, Vec::new())?;
    prune_non_terminal_leaves(g, &tree, &s)
}

pub fn solve(
    g: &Graph,
    req: &MulticastRequest,
    algorithm: Algorithm,
    cfg: &PathSolverConfig,
) -> Result<SteinerTreeResult> {
    match algorithm {
        Algorithm::Tssr => tssr(g, req, cfg),
        Algorithm::Spt => spt_baseline(g, req),
        Algorithm::St => st_baseline(g, req),
        Algorithm::Exact => crate::oracle::exact_min_length_tree(g, req, crate::oracle::DEFAULT_NODE_CAP),
    }
}
