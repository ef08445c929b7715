//! Randomized property suites over a fixed family of unit-disk graphs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{MistError, Result};
use crate::generate::generate_unit_disk;
use crate::graph::{Edge, Graph, NodeId};
use crate::interference::{check_lattice_submodular, check_monotone, check_submodular, Counterexample, PropertyReport};
use crate::nodeset::NodeSet;
use crate::oracle::vicinal_violations;
use crate::steiner::{prune_non_terminal_leaves, Algorithm, SteinerTreeResult};

pub const SUITE_GRAPHS: usize = 50;
pub const MAX_SUITE_NODES: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma1,
    Prune,
    Prop1,
    All,
}

impl FromStr for Suite {
    type Err = MistError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma1" => Ok(Suite::Lemma1),
            "prune" => Ok(Suite::Prune),
            "prop1" => Ok(Suite::Prop1),
            "all" => Ok(Suite::All),
            _ => Err(MistError::InvalidArgument(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lemma1 => "lemma1",
            Suite::Prune => "prune",
            Suite::Prop1 => "prop1",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinedReport {
    pub seed: u64,
    pub graphs: usize,
    pub reports: Vec<PropertyReport>,
    pub passed: bool,
}

/// The graph family: `SUITE_GRAPHS` unit-disk graphs with 10 to 60 nodes,
/// derived from `seed`.
pub fn suite_graphs(seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SUITE_GRAPHS)
        .map(|_| {
            let n = rng.gen_range(10..=MAX_SUITE_NODES);
            let radius = rng.gen_range(0.15..0.45);
            generate_unit_disk(n, radius, 0, rng.gen()).expect("parameters are in range")
        })
        .collect()
}

/// Splits `trials` across graphs as evenly as possible, earlier graphs first.
fn share(trials: usize, graphs: usize, i: usize) -> usize {
    trials / graphs + usize::from(i < trials % graphs)
}

fn merged(name: &str, trials: usize, parts: impl IntoIterator<Item = PropertyReport>) -> PropertyReport {
    let violations = parts.into_iter().flat_map(|r| r.violations).collect();
    PropertyReport::new(name, trials, violations)
}

/// A random spanning tree of `start`'s component, grown by
/// attaching a random frontier edge at each step.
pub fn random_tree(g: &Graph, start: NodeId, rng: &mut impl Rng) -> Vec<Edge> {
    let mut inside = g.set_of([start]);
    let mut frontier: Vec<Edge> = Vec::new();
    let push = |v: NodeId, frontier: &mut Vec<Edge>| {
        for &(w, length) in g.adjacent(v) {
            frontier.push(Edge {
                u: v.min(w),
                v: v.max(w),
                length,
            });
        }
    };
    push(start, &mut frontier);
    let mut edges = Vec::new();
    while !frontier.is_empty() {
        let e = frontier.swap_remove(rng.gen_range(0..frontier.len()));
        let fresh = match (inside.contains(e.u), inside.contains(e.v)) {
            (true, false) => e.v,
            (false, true) => e.u,
            _ => continue,
        };
        inside.insert(fresh);
        edges.push(e);
        push(fresh, &mut frontier);
    }
    edges
}

fn random_terminals(g: &Graph, tree: &SteinerTreeResult, rng: &mut impl Rng) -> NodeSet {
    let p: f64 = rng.gen();
    let mut s = g.set_of([tree.root]);
    for v in tree.vertices.iter() {
        if rng.gen::<f64>() < p {
            s.insert(v);
        }
    }
    s
}

fn random_instance(g: &Graph, rng: &mut impl Rng) -> (SteinerTreeResult, NodeSet) {
    let root = NodeId(rng.gen_range(0..g.node_count()));
    let edges = random_tree(g, root, rng);
    let tree = SteinerTreeResult::from_edges(g, Algorithm::Tssr, root, edges, Vec::new()).expect("set sized for g");
    let s = random_terminals(g, &tree, rng);
    (tree, s)
}

/// Pruning never raises either objective.
pub fn check_prune_monotone(g: &Graph, trials: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..trials {
        let (tree, s) = random_instance(g, &mut rng);
        let pruned = prune_non_terminal_leaves(g, &tree, &s).expect("set sized for g");
        if pruned.total_length > tree.total_length || pruned.interference > tree.interference {
            violations.push(Counterexample::Prune {
                terminals: g.ids(s.iter()),
                tree_vertices: g.ids(tree.vertices.iter()),
                before: (tree.total_length, tree.interference),
                after: (pruned.total_length, pruned.interference),
            });
        }
    }
    PropertyReport::new("prune_monotone", trials, violations)
}

/// No tree vertex is vicinally below a vertex outside the tree's closed
/// neighbourhood. Trees are random pruned subtrees.
pub fn check_vicinal_domination(g: &Graph, trials: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..trials {
        let (tree, s) = random_instance(g, &mut rng);
        let pruned = prune_non_terminal_leaves(g, &tree, &s).expect("set sized for g");
        violations.extend(vicinal_violations(g, &pruned.vertices));
    }
    PropertyReport::new("vicinal_domination", trials, violations)
}

fn per_graph(
    graphs: &[Graph],
    trials: usize,
    seed: u64,
    salt: u64,
    check: fn(&Graph, usize, u64) -> PropertyReport,
) -> Vec<PropertyReport> {
    graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mixed =
                seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
            check(g, share(trials, graphs.len(), i), mixed)
        })
        .collect()
}

/// Runs the selected suites with `trials` samples each, spread over the
/// graph family.
pub fn run_property_suites(suite: Suite, trials: usize, seed: u64) -> Result<CombinedReport> {
    if trials == 0 {
        return Err(MistError::InvalidArgument("trials must be at least 1".into()));
    }
    let graphs = suite_graphs(seed);
    let mut reports = Vec::new();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Lemma1) {
        reports.push(merged(
            "monotone",
            trials,
            per_graph(&graphs, trials, seed, 1, check_monotone),
        ));
        reports.push(merged(
            "submodular",
            trials,
            per_graph(&graphs, trials, seed, 2, check_submodular),
        ));
        reports.push(merged(
            "lattice_submodular",
            trials,
            per_graph(&graphs, trials, seed, 3, check_lattice_submodular),
        ));
    }
    if wants(Suite::Prune) {
        reports.push(merged(
            "prune_monotone",
            trials,
            per_graph(&graphs, trials, seed, 4, check_prune_monotone),
        ));
    }
    if wants(Suite::Prop1) {
        reports.push(merged(
            "vicinal_domination",
            trials,
            per_graph(&graphs, trials, seed, 5, check_vicinal_domination),
        ));
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(CombinedReport {
        seed,
        graphs: graphs.len(),
        reports,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::SteinerTreeResult;

    #[test]
    fn family_is_deterministic_and_bounded() {
        let a = suite_graphs(3);
        assert_eq!(a.len(), SUITE_GRAPHS);
        assert!(a.iter().all(|g| (10..=MAX_SUITE_NODES).contains(&g.node_count())));
        assert_eq!(a, suite_graphs(3));
    }

    #[test]
    fn shares_add_up() {
        for trials in [1, 49, 50, 51, 1000] {
            let total: usize = (0..50).map(|i| share(trials, 50, i)).sum();
            assert_eq!(total, trials);
        }
    }

    #[test]
    fn random_tree_spans_component() {
        let g = generate_unit_disk(40, 0.3, 0, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let edges = random_tree(&g, NodeId(0), &mut rng);
        let t = SteinerTreeResult::from_edges(&g, Algorithm::Tssr, NodeId(0), edges, vec![]).unwrap();
        t.validate(&g, &g.set_of([NodeId(0)])).unwrap_or_else(|e| {
            // non-terminal leaves are expected before pruning
            assert!(e.contains("leaf"), "{e}");
        });
        let comp = crate::paths::dijkstra(&g, NodeId(0))
            .iter()
            .filter(|d| d.is_finite())
            .count();
        assert_eq!(t.vertices.len(), comp);
    }

    #[test]
    fn minimal_run() {
        let r = run_property_suites(Suite::All, 1, 0).unwrap();
        assert_eq!(r.reports.len(), 5);
        assert!(r.passed);
        assert!(r.reports.iter().all(|p| p.trials == 1));
        assert!(run_property_suites(Suite::All, 0, 0).is_err());
    }

    #[test]
    fn repeatable() {
        let a = run_property_suites(Suite::Prune, 40, 11).unwrap();
        assert_eq!(a, run_property_suites(Suite::Prune, 40, 11).unwrap());
    }

    #[test]
    fn suite_names() {
        for s in ["lemma1", "prune", "prop1", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
    }
}
