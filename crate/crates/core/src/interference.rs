//! The closed-neighborhood interference metric `|N[W]|`, exposed as a value
//! oracle, plus randomized checkers for its monotone submodularity and the
//! vicinal preorder on vertices.
//!
//! Solvers evaluate the metric only through this module and never assume it
//! is additive over vertices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MistError, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

/// A set function over `0..ground_size()` accessed by value queries only.
pub trait SetFunction {
    fn ground_size(&self) -> usize;
    fn value(&self, set: &NodeSet) -> usize;
}

/// `W ↦ |N[W]|` on a fixed graph.
#[derive(Clone, Copy)]
pub struct ClosedNeighborhood<'g>(pub &'g Graph);

impl ClosedNeighborhood<'_> {
    pub fn of(&self, w: &NodeSet) -> NodeSet {
        let mut out = self.0.empty_set();
        for v in w.iter() {
            out.union_with(self.0.closed_neighbors(v));
        }
        out
    }

    /// `reached ∪ N[v]`, the incremental form used while growing a path.
    pub fn extend(&self, reached: &NodeSet, v: NodeId) -> NodeSet {
        reached.union(self.0.closed_neighbors(v))
    }

    /// `|reached ∪ N[v]|` without materializing the union.
    pub fn extended_len(&self, reached: &NodeSet, v: NodeId) -> usize {
        reached.union_len(self.0.closed_neighbors(v))
    }
}

impl SetFunction for ClosedNeighborhood<'_> {
    fn ground_size(&self) -> usize {
        self.0.node_count()
    }

    fn value(&self, set: &NodeSet) -> usize {
        self.of(set).len()
    }
}

fn check_set(g: &Graph, w: &NodeSet) -> Result<()> {
    if w.capacity() != g.node_count() {
        return Err(MistError::InvalidArgument(format!(
            "node set sized for {} nodes used with a {}-node graph",
            w.capacity(),
            g.node_count()
        )));
    }
    Ok(())
}

/// `N[W] = ⋃_{v∈W} N(v) ∪ {v}`.
pub fn closed_neighborhood(g: &Graph, w: &NodeSet) -> Result<NodeSet> {
    check_set(g, w)?;
    Ok(ClosedNeighborhood(g).of(w))
}

/// The interference metric `|N[W]|`.
pub fn interference(g: &Graph, w: &NodeSet) -> Result<usize> {
    check_set(g, w)?;
    Ok(ClosedNeighborhood(g).value(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VicinalRelation {
    LessOrEqual,
    GreaterOrEqual,
    Equivalent,
    Incomparable,
}

/// `u ≲ v` iff `N(u) ⊆ N[v]`.
pub fn vicinal_le(g: &Graph, u: NodeId, v: NodeId) -> bool {
    let mut open = g.closed_neighbors(u).clone();
    open.remove(u);
    open.is_subset(g.closed_neighbors(v))
}

pub fn vicinal_compare(g: &Graph, u: NodeId, v: NodeId) -> Result<VicinalRelation> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Err(MistError::InvalidArgument(
            "vicinal comparison needs two distinct nodes".into(),
        ));
    }
    Ok(match (vicinal_le(g, u, v), vicinal_le(g, v, u)) {
        (true, true) => VicinalRelation::Equivalent,
        (true, false) => VicinalRelation::LessOrEqual,
        (false, true) => VicinalRelation::GreaterOrEqual,
        (false, false) => VicinalRelation::Incomparable,
    })
}

/// A concrete witness that some checked property failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    Monotone {
        a: Vec<String>,
        b: Vec<String>,
        value_a: usize,
        value_b: usize,
    },
    Submodular {
        a: Vec<String>,
        b: Vec<String>,
        v: String,
        gain_a: i64,
        gain_b: i64,
    },
    Lattice {
        a: Vec<String>,
        b: Vec<String>,
        lhs: usize,
        rhs: usize,
    },
    Prune {
        terminals: Vec<String>,
        tree_vertices: Vec<String>,
        before: (f64, usize),
        after: (f64, usize),
    },
    Vicinal {
        tree_vertices: Vec<String>,
        outside: String,
        dominated_by: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub suite: String,
    pub trials: usize,
    pub violations: Vec<Counterexample>,
    pub passed: bool,
}

impl PropertyReport {
    pub fn new(suite: impl Into<String>, trials: usize, violations: Vec<Counterexample>) -> Self {
        let passed = violations.is_empty();
        PropertyReport {
            suite: suite.into(),
            trials,
            violations,
            passed,
        }
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, within: Option<&NodeSet>, skip: Option<NodeId>) -> NodeSet {
    let p: f64 = rng.gen();
    let mut s = NodeSet::new(n);
    for i in 0..n {
        let v = NodeId(i);
        if Some(v) == skip || within.is_some_and(|w| !w.contains(v)) {
            continue;
        }
        if rng.gen::<f64>() < p {
            s.insert(v);
        }
    }
    s
}

fn names(set: &NodeSet, name: &dyn Fn(NodeId) -> String) -> Vec<String> {
    set.iter().map(name).collect()
}

fn monotone_violated<F: SetFunction>(f: &F, a: &NodeSet, b: &NodeSet) -> bool {
    f.value(a) > f.value(b)
}

fn gain<F: SetFunction>(f: &F, s: &NodeSet, v: NodeId) -> i64 {
    let mut with = s.clone();
    with.insert(v);
    f.value(&with) as i64 - f.value(s) as i64
}

fn submodular_violated<F: SetFunction>(f: &F, a: &NodeSet, b: &NodeSet, v: NodeId) -> bool {
    gain(f, a, v) < gain(f, b, v)
}

/// Greedily drops elements from a failing nested pair while it keeps failing.
fn minimize_pair(a: &mut NodeSet, b: &mut NodeSet, still_fails: impl Fn(&NodeSet, &NodeSet) -> bool) {
    loop {
        let mut shrunk = false;
        for x in b.to_vec() {
            let (mut a2, mut b2) = (a.clone(), b.clone());
            b2.remove(x);
            a2.remove(x);
            if still_fails(&a2, &b2) {
                (*a, *b) = (a2, b2);
                shrunk = true;
                continue;
            }
            if a.contains(x) {
                let mut a3 = a.clone();
                a3.remove(x);
                if still_fails(&a3, b) {
                    *a = a3;
                    shrunk = true;
                }
            }
        }
        if !shrunk {
            return;
        }
    }
}

/// Samples nested pairs `A ⊆ B` and checks `f(A) ≤ f(B)`.
pub fn check_monotone_with<F: SetFunction>(
    f: &F,
    trials: usize,
    seed: u64,
    name: &dyn Fn(NodeId) -> String,
) -> PropertyReport {
    let n = f.ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..trials {
        let mut b = random_subset(&mut rng, n, None, None);
        let mut a = random_subset(&mut rng, n, Some(&b), None);
        if monotone_violated(f, &a, &b) {
            minimize_pair(&mut a, &mut b, |a, b| monotone_violated(f, a, b));
            violations.push(Counterexample::Monotone {
                value_a: f.value(&a),
                value_b: f.value(&b),
                a: names(&a, name),
                b: names(&b, name),
            });
        }
    }
    PropertyReport::new("monotone", trials, violations)
}

/// Samples `A ⊆ B` and `v ∉ B` and checks the diminishing-returns inequality
/// `f(A ∪ {v}) − f(A) ≥ f(B ∪ {v}) − f(B)`.
pub fn check_submodular_with<F: SetFunction>(
    f: &F,
    trials: usize,
    seed: u64,
    name: &dyn Fn(NodeId) -> String,
) -> PropertyReport {
    let n = f.ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    if n == 0 {
        return PropertyReport::new("submodular", 0, violations);
    }
    for _ in 0..trials {
        let v = NodeId(rng.gen_range(0..n));
        let mut b = random_subset(&mut rng, n, None, Some(v));
        let mut a = random_subset(&mut rng, n, Some(&b), None);
        if submodular_violated(f, &a, &b, v) {
            minimize_pair(&mut a, &mut b, |a, b| submodular_violated(f, a, b, v));
            violations.push(Counterexample::Submodular {
                gain_a: gain(f, &a, v),
                gain_b: gain(f, &b, v),
                a: names(&a, name),
                b: names(&b, name),
                v: name(v),
            });
        }
    }
    PropertyReport::new("submodular", trials, violations)
}

/// Samples arbitrary `A`, `B` and checks `f(A) + f(B) ≥ f(A ∪ B) + f(A ∩ B)`.
pub fn check_lattice_submodular_with<F: SetFunction>(
    f: &F,
    trials: usize,
    seed: u64,
    name: &dyn Fn(NodeId) -> String,
) -> PropertyReport {
    let n = f.ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..trials {
        let a = random_subset(&mut rng, n, None, None);
        let b = random_subset(&mut rng, n, None, None);
        let lhs = f.value(&a) + f.value(&b);
        let rhs = f.value(&a.union(&b)) + f.value(&a.intersection(&b));
        if lhs < rhs {
            violations.push(Counterexample::Lattice {
                a: names(&a, name),
                b: names(&b, name),
                lhs,
                rhs,
            });
        }
    }
    PropertyReport::new("lattice_submodular", trials, violations)
}

pub fn check_monotone(g: &Graph, trials: usize, seed: u64) -> PropertyReport {
    check_monotone_with(&ClosedNeighborhood(g), trials, seed, &|v| g.id(v).to_string())
}

pub fn check_submodular(g: &Graph, trials: usize, seed: u64) -> PropertyReport {
    check_submodular_with(&ClosedNeighborhood(g), trials, seed, &|v| g.id(v).to_string())
}

pub fn check_lattice_submodular(g: &Graph, trials: usize, seed: u64) -> PropertyReport {
    check_lattice_submodular_with(&ClosedNeighborhood(g), trials, seed, &|v| g.id(v).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_unit_disk;
    use crate::graph::fixtures::*;
    use crate::graph::GraphBuilder;

    fn set(g: &Graph, ids: &[&str]) -> NodeSet {
        g.set_by_ids(ids).unwrap()
    }

    /// Closed neighborhood straight from the edge list.
    fn brute_closed(g: &Graph, w: &[&str]) -> Vec<String> {
        let mut out: Vec<String> = w.iter().map(|s| s.to_string()).collect();
        for e in g.edges() {
            let (u, v) = (g.id(e.u), g.id(e.v));
            if w.contains(&u) {
                out.push(v.to_string());
            }
            if w.contains(&v) {
                out.push(u.to_string());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn closed_neighborhood_examples() {
        let g = path(&["a", "b", "c", "d"]);
        assert!(closed_neighborhood(&g, &g.empty_set()).unwrap().is_empty());
        let nb = closed_neighborhood(&g, &set(&g, &["b"])).unwrap();
        assert_eq!(g.ids(nb.iter()), vec!["a", "b", "c"]);
        let nad = closed_neighborhood(&g, &set(&g, &["a", "d"])).unwrap();
        assert_eq!(g.ids(nad.iter()), brute_closed(&g, &["a", "d"]));
        assert_eq!(g.ids(nad.iter()), vec!["a", "b", "c", "d"]);
    }

    #[test]
    fn interference_examples() {
        let g = path(&["a", "b"]);
        assert_eq!(interference(&g, &g.empty_set()).unwrap(), 0);
        let g = star("c", &["l1", "l2", "l3", "l4", "l5"]);
        assert_eq!(interference(&g, &set(&g, &["c"])).unwrap(), 6);
    }

    #[test]
    fn mismatched_set_is_rejected() {
        let g = path(&["a", "b"]);
        assert!(interference(&g, &NodeSet::new(5)).is_err());
    }

    #[test]
    fn monotone_holds_on_random_graphs() {
        let g = generate_unit_disk(40, 0.25, 0, 11).unwrap();
        let r = check_monotone(&g, 1000, 5);
        assert!(r.passed && r.trials == 1000);
    }

    #[test]
    fn empty_graph_passes_vacuously() {
        let g = GraphBuilder::new().build().unwrap();
        assert!(check_monotone(&g, 10, 1).passed);
        assert!(check_submodular(&g, 10, 1).passed);
    }

    #[test]
    fn complete_graph_saturates() {
        let g = complete(&["a", "b", "c", "d", "e"]);
        let a = set(&g, &["a"]);
        let b = set(&g, &["a", "b", "c"]);
        assert_eq!(interference(&g, &a).unwrap(), 5);
        assert_eq!(interference(&g, &b).unwrap(), 5);
        assert!(!monotone_violated(&ClosedNeighborhood(&g), &a, &b));
    }

    #[test]
    fn submodular_examples() {
        let g = path(&["a", "b", "c", "d"]);
        let f = ClosedNeighborhood(&g);
        let a = set(&g, &["a"]);
        let b = set(&g, &["a", "c"]);
        let d = g.node("d").unwrap();
        let (ga, gb) = (gain(&f, &a, d), gain(&f, &b, d));
        // |N[{a}]| = 2, |N[{a,d}]| = 4; |N[{a,c}]| = 4, |N[{a,c,d}]| = 4
        assert_eq!((ga, gb), (2, 0));
        assert!(!submodular_violated(&f, &a, &b, d));
        let r = check_submodular(&generate_unit_disk(50, 0.2, 0, 4).unwrap(), 1000, 9);
        assert!(r.passed);
    }

    /// A set function that rewards small sets, so both checks must fail and
    /// the reported witnesses must be minimal.
    struct Shrinking(usize);
    impl SetFunction for Shrinking {
        fn ground_size(&self) -> usize {
            self.0
        }
        fn value(&self, set: &NodeSet) -> usize {
            self.0 - set.len()
        }
    }

    /// |S|² is monotone but supermodular.
    struct Square(usize);
    impl SetFunction for Square {
        fn ground_size(&self) -> usize {
            self.0
        }
        fn value(&self, set: &NodeSet) -> usize {
            set.len() * set.len()
        }
    }

    #[test]
    fn counterexamples_are_minimized() {
        let name = |v: NodeId| v.0.to_string();
        let r = check_monotone_with(&Shrinking(12), 200, 3, &name);
        assert!(!r.passed);
        for c in &r.violations {
            match c {
                Counterexample::Monotone { a, b, .. } => {
                    assert!(a.is_empty());
                    assert_eq!(b.len(), 1);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        let r = check_submodular_with(&Square(12), 200, 3, &name);
        assert!(!r.passed);
        for c in &r.violations {
            match c {
                Counterexample::Submodular {
                    a, b, gain_a, gain_b, ..
                } => {
                    assert!(a.is_empty() && b.len() == 1);
                    assert_eq!((*gain_a, *gain_b), (1, 3));
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(!check_lattice_submodular_with(&Square(12), 200, 3, &name).passed);
    }

    #[test]
    fn vicinal_examples() {
        let g = star("c", &["u", "w", "x"]);
        let (c, u, w) = (g.node("c").unwrap(), g.node("u").unwrap(), g.node("w").unwrap());
        assert_eq!(vicinal_compare(&g, u, c).unwrap(), VicinalRelation::LessOrEqual);
        assert_eq!(vicinal_compare(&g, c, u).unwrap(), VicinalRelation::GreaterOrEqual);
        assert_eq!(vicinal_compare(&g, u, w).unwrap(), VicinalRelation::Equivalent);

        let g = path(&["a", "b", "c", "d"]);
        let (a, d) = (g.node("a").unwrap(), g.node("d").unwrap());
        assert_eq!(vicinal_compare(&g, a, d).unwrap(), VicinalRelation::Incomparable);
        assert!(vicinal_compare(&g, a, a).is_err());
        assert!(vicinal_compare(&g, a, NodeId(40)).is_err());
    }

    #[test]
    fn report_serializes() {
        let r = PropertyReport::new("monotone", 3, vec![]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"suite":"monotone","trials":3,"violations":[],"passed":true}"#);
    }
}
