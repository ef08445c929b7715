//! Closed-neighborhood minimization over s-t shortest paths: among all
//! minimum-length s-t paths, find one whose vertex set has the smallest
//! closed neighborhood.
//!
//! The exact solver is a label-setting search restricted to the shortest-path
//! DAG. A label is a partial path together with the closed neighborhood it
//! has reached so far. Labels are expanded in order of (reached size, node
//! sequence); since both only grow along an extension, the first label to
//! reach `t` is optimal and lexicographically smallest among optimal paths.
//! A settled label `(v, R1)` discards any later `(v, R2)` with `R1 ⊆ R2`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{MistError, Result};
use crate::graph::{Graph, NodeId};
use crate::interference::ClosedNeighborhood;
use crate::nodeset::NodeSet;
use crate::paths::{Path, ShortestDag, TIE_EPSILON};

pub const DEFAULT_LABEL_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    Exact,
    Greedy,
    #[default]
    Auto,
}

impl std::str::FromStr for SolverMode {
    type Err = MistError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolverMode::Exact),
            "greedy" => Ok(SolverMode::Greedy),
            "auto" => Ok(SolverMode::Auto),
            other => Err(MistError::InvalidArgument(format!("unknown solver mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathSolverConfig {
    pub mode: SolverMode,
    pub label_cap: usize,
    pub tie_epsilon: f64,
}

impl Default for PathSolverConfig {
    fn default() -> Self {
        PathSolverConfig {
            mode: SolverMode::Auto,
            label_cap: DEFAULT_LABEL_CAP,
            tie_epsilon: TIE_EPSILON,
        }
    }
}

impl PathSolverConfig {
    pub fn exact() -> Self {
        PathSolverConfig {
            mode: SolverMode::Exact,
            ..Default::default()
        }
    }

    pub fn greedy() -> Self {
        PathSolverConfig {
            mode: SolverMode::Greedy,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.label_cap == 0 {
            return Err(MistError::InvalidArgument("label_cap must be at least 1".into()));
        }
        if !(self.tie_epsilon >= 0.0 && self.tie_epsilon.is_finite()) {
            return Err(MistError::InvalidArgument("tie_epsilon must be finite and ≥ 0".into()));
        }
        Ok(())
    }
}

/// Which search produced a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeUsed {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSolution {
    pub path: Path,
    pub interference: usize,
    pub mode: ModeUsed,
    /// Labels created by the exact search (0 for greedy).
    pub labels: usize,
}

/// Best open label when the exact search ran out of budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialLabel {
    pub nodes: Vec<String>,
    pub interference: usize,
}

/// Search state: a partial path inside the shortest-path DAG.
#[derive(Clone, Debug)]
struct PathLabel {
    path: Vec<NodeId>,
    reached: NodeSet,
    /// Vertices on the path; only tracked when zero-length links make the
    /// DAG cyclic.
    visited: Option<NodeSet>,
}

impl PathLabel {
    fn at(&self) -> NodeId {
        *self.path.last().unwrap()
    }

    fn dominates(&self, other: &PathLabel) -> bool {
        self.reached.is_subset(&other.reached)
            && match (&self.visited, &other.visited) {
                (Some(a), Some(b)) => a.is_subset(b),
                _ => true,
            }
    }
}

struct Queued(PathLabel);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    // reversed: BinaryHeap pops the smallest (reached size, path)
    fn cmp(&self, other: &Self) -> Ordering {
        (other.0.reached.len(), &other.0.path).cmp(&(self.0.reached.len(), &self.0.path))
    }
}

enum ExactOutcome {
    Found(Vec<NodeId>, usize, usize),
    BudgetExceeded(Option<PathLabel>),
}

fn exact_search(g: &Graph, dag: &ShortestDag, label_cap: usize, prune: bool) -> ExactOutcome {
    let metric = ClosedNeighborhood(g);
    let n = g.node_count();
    let track_visited = !dag.is_acyclic();
    let start = PathLabel {
        path: vec![dag.source],
        reached: g.closed_neighbors(dag.source).clone(),
        visited: track_visited.then(|| g.set_of([dag.source])),
    };
    let mut settled: Vec<Vec<PathLabel>> = vec![Vec::new(); n];
    let mut heap = BinaryHeap::new();
    heap.push(Queued(start));
    let mut created = 1usize;

    while let Some(Queued(label)) = heap.pop() {
        let v = label.at();
        if prune && settled[v.0].iter().any(|s| s.dominates(&label)) {
            continue;
        }
        if v == dag.target {
            let size = label.reached.len();
            return ExactOutcome::Found(label.path, size, created);
        }
        for &(w, _) in dag.successors(v) {
            if label.visited.as_ref().is_some_and(|vis| vis.contains(w)) {
                continue;
            }
            let mut path = label.path.clone();
            path.push(w);
            let child = PathLabel {
                path,
                reached: metric.extend(&label.reached, w),
                visited: label.visited.as_ref().map(|vis| {
                    let mut vis = vis.clone();
                    vis.insert(w);
                    vis
                }),
            };
            if prune && settled[w.0].iter().any(|s| s.dominates(&child)) {
                continue;
            }
            created += 1;
            if created > label_cap {
                let best = heap.pop().map(|q| q.0).unwrap_or(child);
                return ExactOutcome::BudgetExceeded(Some(best));
            }
            heap.push(Queued(child));
        }
        if prune {
            settled[v.0].retain(|s| !label.dominates(s));
            settled[v.0].push(label);
        }
    }
    // the DAG always contains an s-t path, so the loop returns first
    ExactOutcome::BudgetExceeded(None)
}

/// Depth-first descent through the DAG, always trying the successor with the
/// smallest resulting interference first (ties to the smaller node id).
/// Backtracking only happens when zero-length cycles lead into dead ends.
fn greedy_search(g: &Graph, dag: &ShortestDag) -> (Vec<NodeId>, usize) {
    let metric = ClosedNeighborhood(g);
    fn descend(
        dag: &ShortestDag,
        metric: &ClosedNeighborhood<'_>,
        path: &mut Vec<NodeId>,
        on_path: &mut NodeSet,
        reached: &NodeSet,
    ) -> Option<usize> {
        let v = *path.last().unwrap();
        if v == dag.target {
            return Some(reached.len());
        }
        let mut options: Vec<(usize, NodeId)> = dag
            .successors(v)
            .iter()
            .filter(|(w, _)| !on_path.contains(*w))
            .map(|&(w, _)| (metric.extended_len(reached, w), w))
            .collect();
        options.sort();
        for (_, w) in options {
            path.push(w);
            on_path.insert(w);
            if let Some(size) = descend(dag, metric, path, on_path, &metric.extend(reached, w)) {
                return Some(size);
            }
            on_path.remove(w);
            path.pop();
        }
        None
    }
    let mut path = vec![dag.source];
    let mut on_path = g.set_of([dag.source]);
    let size = descend(dag, &metric, &mut path, &mut on_path, g.closed_neighbors(dag.source))
        .expect("every DAG node lies on an s-t path");
    (path, size)
}

fn to_path(g: &Graph, nodes: Vec<NodeId>) -> Path {
    let length = nodes
        .windows(2)
        .map(|w| g.edge_length(w[0], w[1]).expect("DAG arcs are graph edges"))
        .fold(0.0, |acc, l| acc + l);
    Path { nodes, length }
}

/// Minimum-interference path among the minimum-length s-t paths.
pub fn min_interference_shortest_path(g: &Graph, s: NodeId, t: NodeId, cfg: &PathSolverConfig) -> Result<PathSolution> {
    cfg.validate()?;
    let dag = ShortestDag::build(g, s, t, cfg.tie_epsilon)?;
    let greedy = |dag: &ShortestDag| {
        let (nodes, size) = greedy_search(g, dag);
        PathSolution {
            path: to_path(g, nodes),
            interference: size,
            mode: ModeUsed::Greedy,
            labels: 0,
        }
    };
    if cfg.mode == SolverMode::Greedy {
        return Ok(greedy(&dag));
    }
    match exact_search(g, &dag, cfg.label_cap, true) {
        ExactOutcome::Found(nodes, size, labels) => Ok(PathSolution {
            path: to_path(g, nodes),
            interference: size,
            mode: ModeUsed::Exact,
            labels,
        }),
        ExactOutcome::BudgetExceeded(_) if cfg.mode == SolverMode::Auto => Ok(greedy(&dag)),
        ExactOutcome::BudgetExceeded(best) => Err(MistError::ExactBudgetExceeded {
            cap: cfg.label_cap,
            best: best.map(|l| PartialLabel {
                nodes: g.ids(l.path.iter().copied()),
                interference: l.reached.len(),
            }),
        }),
    }
}

/// Best-first heuristic over the shortest-path DAG. Always returns a
/// minimum-length path; its interference is only an upper bound.
pub fn greedy_interference_path(g: &Graph, s: NodeId, t: NodeId) -> Result<Path> {
    let dag = ShortestDag::build(g, s, t, TIE_EPSILON)?;
    Ok(to_path(g, greedy_search(g, &dag).0))
}
