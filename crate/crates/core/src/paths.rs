//! Shortest-path machinery: Dijkstra, simple paths, and the s-t
//! shortest-path DAG that bounds the interference-aware path search.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{MistError, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

/// Default absolute tolerance for treating two path lengths as equal.
pub const TIE_EPSILON: f64 = 1e-9;

/// A simple path given by its node sequence.
#[derive(Clone, PartialEq, Debug)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub length: f64,
}

impl Path {
    pub fn trivial(v: NodeId) -> Path {
        Path {
            nodes: vec![v],
            length: 0.0,
        }
    }

    /// Builds a path from a node sequence, checking adjacency and simplicity.
    pub fn from_nodes(g: &Graph, nodes: Vec<NodeId>) -> Result<Path> {
        if nodes.is_empty() {
            return Err(MistError::InvalidArgument("empty path".into()));
        }
        let mut seen = g.empty_set();
        for &v in &nodes {
            g.check(v)?;
            if !seen.insert(v) {
                return Err(MistError::InvalidArgument(format!("path repeats node {}", g.id(v))));
            }
        }
        let mut length = 0.0;
        for w in nodes.windows(2) {
            length += g.edge_length(w[0], w[1]).ok_or_else(|| {
                MistError::InvalidArgument(format!("{} and {} are not adjacent", g.id(w[0]), g.id(w[1])))
            })?;
        }
        Ok(Path { nodes, length })
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths are non-empty")
    }

    /// Consecutive node pairs.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn vertex_set(&self, g: &Graph) -> NodeSet {
        g.set_of(self.nodes.iter().copied())
    }

    pub fn ids(&self, g: &Graph) -> Vec<String> {
        g.ids(self.nodes.iter().copied())
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Single-source distances; unreachable nodes get `f64::INFINITY`.
pub fn dijkstra(g: &Graph, source: NodeId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source.0] = 0.0;
    heap.push(std::cmp::Reverse((Dist(0.0), source)));
    while let Some(std::cmp::Reverse((Dist(d), u))) = heap.pop() {
        if d > dist[u.0] {
            continue;
        }
        for &(w, len) in g.adjacent(u) {
            let nd = d + len;
            if nd < dist[w.0] {
                dist[w.0] = nd;
                heap.push(std::cmp::Reverse((Dist(nd), w)));
            }
        }
    }
    dist
}

/// Length of a shortest s-t path, or `f64::INFINITY` when t is unreachable.
pub fn shortest_distance(g: &Graph, s: NodeId, t: NodeId) -> Result<f64> {
    g.check(s)?;
    g.check(t)?;
    if s == t {
        return Ok(0.0);
    }
    Ok(dijkstra(g, s)[t.0])
}

/// Shortest-path tree from `root` in which every node's root path is the
/// lexicographically smallest node sequence among its minimum-length paths.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub root: NodeId,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<NodeId>>,
}

#[derive(PartialEq, Eq)]
struct LexKey {
    dist: Dist,
    path: Vec<NodeId>,
}

impl PartialOrd for LexKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist.cmp(&other.dist).then_with(|| self.path.cmp(&other.path))
    }
}

impl ShortestPathTree {
    pub fn build(g: &Graph, root: NodeId) -> Result<Self> {
        g.check(root)?;
        let n = g.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![None; n];
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        heap.push(std::cmp::Reverse(LexKey {
            dist: Dist(0.0),
            path: vec![root],
        }));
        // keys only grow along an extension, so the first pop of a node
        // carries its minimum (distance, node sequence)
        while let Some(std::cmp::Reverse(key)) = heap.pop() {
            let u = *key.path.last().unwrap();
            if settled[u.0] {
                continue;
            }
            settled[u.0] = true;
            dist[u.0] = key.dist.0;
            if key.path.len() > 1 {
                parent[u.0] = Some(key.path[key.path.len() - 2]);
            }
            for &(w, len) in g.adjacent(u) {
                let nd = key.dist.0 + len;
                if !settled[w.0] && nd <= dist[w.0] {
                    dist[w.0] = nd;
                    let mut path = key.path.clone();
                    path.push(w);
                    heap.push(std::cmp::Reverse(LexKey { dist: Dist(nd), path }));
                }
            }
        }
        Ok(ShortestPathTree { root, dist, parent })
    }

    pub fn path_to(&self, g: &Graph, t: NodeId) -> Result<Path> {
        g.check(t)?;
        if !self.dist[t.0].is_finite() {
            return Err(MistError::Unreachable {
                source_node: g.id(self.root).to_string(),
                target: g.id(t).to_string(),
            });
        }
        let mut nodes = vec![t];
        let mut cur = t;
        while let Some(p) = self.parent[cur.0] {
            nodes.push(p);
            cur = p;
        }
        nodes.reverse();
        Ok(Path {
            nodes,
            length: self.dist[t.0],
        })
    }
}

/// Interference-oblivious s-t shortest path with lexicographic node-id
/// tie-breaking.
pub fn plain_shortest_path(g: &Graph, s: NodeId, t: NodeId) -> Result<Path> {
    ShortestPathTree::build(g, s)?.path_to(g, t)
}

/// Every minimum-length s-t path, encoded as a directed subgraph.
///
/// The arc u→v is present iff `dist(s,u) + len(u,v) + dist(v,t)` equals
/// `dist(s,t)` within the tie tolerance. Zero-length links can make the
/// subgraph cyclic; `acyclic` records whether that happened.
#[derive(Clone, Debug)]
pub struct ShortestDag {
    pub source: NodeId,
    pub target: NodeId,
    pub distance: f64,
    pub epsilon: f64,
    successors: Vec<Vec<(NodeId, f64)>>,
    acyclic: bool,
}

impl ShortestDag {
    pub fn build(g: &Graph, s: NodeId, t: NodeId, epsilon: f64) -> Result<Self> {
        g.check(s)?;
        g.check(t)?;
        let n = g.node_count();
        let mut successors = vec![Vec::new(); n];
        if s == t {
            return Ok(ShortestDag {
                source: s,
                target: t,
                distance: 0.0,
                epsilon,
                successors,
                acyclic: true,
            });
        }
        let from_s = dijkstra(g, s);
        let to_t = dijkstra(g, t);
        let total = from_s[t.0];
        if !total.is_finite() {
            return Err(MistError::Unreachable {
                source_node: g.id(s).to_string(),
                target: g.id(t).to_string(),
            });
        }
        for e in g.edges() {
            for (u, v) in [(e.u, e.v), (e.v, e.u)] {
                let through = from_s[u.0] + e.length + to_t[v.0];
                if through.is_finite() && (through - total).abs() <= epsilon && u != t && v != s {
                    successors[u.0].push((v, e.length));
                }
            }
        }
        for succ in &mut successors {
            succ.sort_by_key(|&(w, _)| w);
        }
        let acyclic = is_acyclic(&successors);
        Ok(ShortestDag {
            source: s,
            target: t,
            distance: total,
            epsilon,
            successors,
            acyclic,
        })
    }

    pub fn successors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.successors[v.0]
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    /// Arcs in (tail, head) index order.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(u, succ)| succ.iter().map(move |&(v, _)| (NodeId(u), v)))
            .collect()
    }

    /// Depth-first walk over all simple s-t paths of the DAG, successors in
    /// index order. `visit` returns `false` to stop early.
    pub fn for_each_path(&self, mut visit: impl FnMut(&[NodeId], f64) -> bool) {
        let n = self.successors.len();
        let mut on_path = vec![false; n];
        let mut stack = vec![self.source];
        on_path[self.source.0] = true;
        fn walk(
            dag: &ShortestDag,
            stack: &mut Vec<NodeId>,
            on_path: &mut [bool],
            length: f64,
            visit: &mut dyn FnMut(&[NodeId], f64) -> bool,
        ) -> bool {
            let u = *stack.last().unwrap();
            if u == dag.target {
                return visit(stack, length);
            }
            for &(w, len) in dag.successors(u) {
                if on_path[w.0] {
                    continue;
                }
                on_path[w.0] = true;
                stack.push(w);
                let go_on = walk(dag, stack, on_path, length + len, visit);
                stack.pop();
                on_path[w.0] = false;
                if !go_on {
                    return false;
                }
            }
            true
        }
        walk(self, &mut stack, &mut on_path, 0.0, &mut visit);
    }
}

fn is_acyclic(successors: &[Vec<(NodeId, f64)>]) -> bool {
    let n = successors.len();
    let mut indegree = vec![0usize; n];
    for succ in successors {
        for &(w, _) in succ {
            indegree[w.0] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop_front() {
        seen += 1;
        for &(w, _) in &successors[u] {
            indegree[w.0] -= 1;
            if indegree[w.0] == 0 {
                queue.push_back(w.0);
            }
        }
    }
    seen == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::GraphBuilder;

    fn id(g: &Graph, s: &str) -> NodeId {
        g.node(s).unwrap()
    }

    #[test]
    fn distance_examples() {
        let g = path(&["a", "b"]);
        assert_eq!(shortest_distance(&g, id(&g, "a"), id(&g, "a")).unwrap(), 0.0);

        let mut b = GraphBuilder::new();
        b.node("s").node("t").edge("s", "t", 2.5);
        let g = b.build().unwrap();
        assert_eq!(shortest_distance(&g, id(&g, "s"), id(&g, "t")).unwrap(), 2.5);

        let mut b = GraphBuilder::new();
        b.node("a").node("b").node("c").node("d");
        b.edge("a", "b", 1.0)
            .edge("b", "c", 1.0)
            .edge("c", "d", 1.0)
            .edge("d", "a", 1.0);
        let g = b.build().unwrap();
        assert_eq!(shortest_distance(&g, id(&g, "a"), id(&g, "c")).unwrap(), 2.0);
    }

    #[test]
    fn disconnected_is_infinite() {
        let mut b = GraphBuilder::new();
        b.node("a").node("b");
        let g = b.build().unwrap();
        assert!(shortest_distance(&g, id(&g, "a"), id(&g, "b")).unwrap().is_infinite());
        assert!(shortest_distance(&g, NodeId(0), NodeId(9)).is_err());
    }

    #[test]
    fn dag_single_edge() {
        let g = path(&["s", "t"]);
        let dag = ShortestDag::build(&g, id(&g, "s"), id(&g, "t"), TIE_EPSILON).unwrap();
        assert_eq!(dag.arcs(), vec![(id(&g, "s"), id(&g, "t"))]);
    }

    #[test]
    fn dag_diamond_keeps_both_ties() {
        let mut b = GraphBuilder::new();
        b.node("s").node("a").node("b").node("t");
        b.edge("s", "a", 1.0)
            .edge("a", "t", 1.0)
            .edge("s", "b", 1.0)
            .edge("b", "t", 1.0);
        let g = b.build().unwrap();
        let dag = ShortestDag::build(&g, id(&g, "s"), id(&g, "t"), TIE_EPSILON).unwrap();
        assert_eq!(dag.arcs().len(), 4);
        let mut count = 0;
        dag.for_each_path(|_, len| {
            assert_eq!(len, 2.0);
            count += 1;
            true
        });
        assert_eq!(count, 2);
    }

    #[test]
    fn dag_excludes_longer_direct_edge() {
        // s–a–t costs 2.0, s–t costs 1.5: only the direct edge is shortest
        let mut b = GraphBuilder::new();
        b.node("s").node("a").node("t");
        b.edge("s", "a", 1.0).edge("a", "t", 1.0).edge("s", "t", 1.5);
        let g = b.build().unwrap();
        let dag = ShortestDag::build(&g, id(&g, "s"), id(&g, "t"), TIE_EPSILON).unwrap();
        assert_eq!(dag.distance, 1.5);
        assert_eq!(dag.arcs(), vec![(id(&g, "s"), id(&g, "t"))]);

        // with the direct edge at 2.5 the two-hop route wins instead
        let mut b = GraphBuilder::new();
        b.node("s").node("a").node("t");
        b.edge("s", "a", 1.0).edge("a", "t", 1.0).edge("s", "t", 2.5);
        let g = b.build().unwrap();
        let dag = ShortestDag::build(&g, id(&g, "s"), id(&g, "t"), TIE_EPSILON).unwrap();
        assert!(!dag.arcs().contains(&(id(&g, "s"), id(&g, "t"))));
        assert_eq!(dag.arcs().len(), 2);
    }

    #[test]
    fn dag_unreachable() {
        let mut b = GraphBuilder::new();
        b.node("s").node("t");
        let g = b.build().unwrap();
        assert!(matches!(
            ShortestDag::build(&g, NodeId(0), NodeId(1), TIE_EPSILON),
            Err(MistError::Unreachable { .. })
        ));
    }

    #[test]
    fn zero_length_links_make_cycles_but_paths_stay_simple() {
        let mut b = GraphBuilder::new();
        b.node("s").node("u").node("v").node("t");
        b.edge("s", "u", 1.0)
            .edge("s", "v", 1.0)
            .edge("u", "v", 0.0)
            .edge("u", "t", 1.0)
            .edge("v", "t", 1.0);
        let g = b.build().unwrap();
        let dag = ShortestDag::build(&g, id(&g, "s"), id(&g, "t"), TIE_EPSILON).unwrap();
        assert!(!dag.is_acyclic());
        let mut paths = Vec::new();
        dag.for_each_path(|p, _| {
            paths.push(g.ids(p.iter().copied()).join(""));
            true
        });
        assert_eq!(paths, vec!["sut", "suvt", "svt", "svut"]);
    }

    #[test]
    fn lexicographic_plain_path() {
        let mut b = GraphBuilder::new();
        b.node("s").node("b").node("a").node("t");
        b.edge("s", "b", 1.0)
            .edge("b", "t", 1.0)
            .edge("s", "a", 1.0)
            .edge("a", "t", 1.0);
        let g = b.build().unwrap();
        let p = plain_shortest_path(&g, id(&g, "s"), id(&g, "t")).unwrap();
        assert_eq!(p.ids(&g), vec!["s", "a", "t"]);
        assert_eq!(p.length, 2.0);
    }

    #[test]
    fn path_validation() {
        let g = path(&["a", "b", "c"]);
        let p = Path::from_nodes(&g, vec![NodeId(0), NodeId(1), NodeId(2)]).unwrap();
        assert_eq!(p.length, 2.0);
        assert!(Path::from_nodes(&g, vec![NodeId(0), NodeId(2)]).is_err());
        assert!(Path::from_nodes(&g, vec![NodeId(0), NodeId(1), NodeId(0)]).is_err());
    }
}
