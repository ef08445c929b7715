//! The bundled ten-node reference instance and its eleven requests.
//!
//! Only a few facts about the reference network are known: the root is `N1`
//! hosting `F1`, `N2` hosts `F2` over a direct unit link to `N1`, both have
//! degree three, and `N[{N1, N2}]` has six nodes. The graph here satisfies
//! all of them; the other links and the placement of `F3`/`F4` are invented.
//! So request R1, and the pattern of equal lengths with TSSR never worse on
//! interference, are the only things worth comparing against the reference
//! results.

use crate::graph::{Graph, GraphBuilder};
use crate::steiner::MulticastRequest;

pub const PAPER_ROOT: &str = "N1";

const LINKS: [(&str, &str); 10] = [
    ("N1", "N2"),
    ("N1", "N6"),
    ("N1", "N7"),
    ("N2", "N3"),
    ("N2", "N5"),
    ("N3", "N4"),
    ("N3", "N8"),
    ("N3", "N9"),
    ("N4", "N5"),
    ("N4", "N10"),
];

const REQUESTS: [&[&str]; 11] = [
    &["F1", "F2"],
    &["F1", "F3"],
    &["F1", "F4"],
    &["F2", "F3"],
    &["F2", "F4"],
    &["F3", "F4"],
    &["F1", "F2", "F3"],
    &["F1", "F2", "F4"],
    &["F1", "F3", "F4"],
    &["F2", "F3", "F4"],
    &["F1", "F2", "F3", "F4"],
];

#[derive(Clone, Debug)]
pub struct PaperInstance {
    pub graph: Graph,
    /// `("R1", request)` through `("R11", request)`.
    pub requests: Vec<(String, MulticastRequest)>,
}

pub fn reconstruct_paper_instance() -> PaperInstance {
    let mut b = GraphBuilder::new();
    for i in 1..=10 {
        let id = format!("N{i}");
        if i <= 4 {
            b.node_with_function(id, format!("F{i}"));
        } else {
            b.node(id);
        }
    }
    for (u, v) in LINKS {
        b.edge(u, v, 1.0);
    }
    let graph = b.build().expect("bundled instance is valid");
    let requests = REQUESTS
        .iter()
        .enumerate()
        .map(|(i, fs)| {
            let req = MulticastRequest::new(PAPER_ROOT, fs.iter().copied()).expect("non-empty request");
            (format!("R{}", i + 1), req)
        })
        .collect();
    PaperInstance { graph, requests }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interference::interference;
    use crate::pareto_path::PathSolverConfig;
    use crate::steiner::{spt_baseline, st_baseline, terminals_of, tssr};

    #[test]
    fn stated_facts_hold() {
        let p = reconstruct_paper_instance();
        let g = &p.graph;
        let (n1, n2) = (g.node("N1").unwrap(), g.node("N2").unwrap());
        assert_eq!(g.host_of("F1").unwrap(), n1);
        assert_eq!(g.host_of("F2").unwrap(), n2);
        assert_eq!(g.edge_length(n1, n2), Some(1.0));
        assert_eq!((g.degree(n1), g.degree(n2)), (3, 3));
        assert_eq!(interference(g, &g.set_of([n1, n2])).unwrap(), 6);
    }

    #[test]
    fn request_table() {
        let p = reconstruct_paper_instance();
        assert_eq!(p.requests.len(), 11);
        assert_eq!(p.requests[10].1.functions, vec!["F1", "F2", "F3", "F4"]);
        assert_eq!(p.requests[0].0, "R1");
        let s = terminals_of(&p.graph, &p.requests[0].1).unwrap();
        assert_eq!(p.graph.ids(s.iter()), vec!["N1", "N2"]);
    }

    #[test]
    fn reconstruction_values() {
        // values of this reconstruction, not of the reference network
        let p = reconstruct_paper_instance();
        let g = &p.graph;
        let cfg = PathSolverConfig::default();
        let mut rows = Vec::new();
        for (_, r) in &p.requests {
            let s = terminals_of(g, r).unwrap();
            let a = tssr(g, r, &cfg).unwrap();
            let b = spt_baseline(g, r).unwrap();
            let c = st_baseline(g, r).unwrap();
            for t in [&a, &b, &c] {
                t.validate(g, &s).unwrap();
            }
            rows.push((
                a.total_length,
                a.interference,
                b.total_length,
                b.interference,
                c.total_length,
                c.interference,
            ));
        }
        let len: Vec<f64> = rows.iter().map(|r| r.0).collect();
        assert_eq!(len, [1.0, 2.0, 3.0, 2.0, 3.0, 3.0, 2.0, 3.0, 3.0, 3.0, 3.0]);
        let tssr_i: Vec<usize> = rows.iter().map(|r| r.1).collect();
        let spt_i: Vec<usize> = rows.iter().map(|r| r.3).collect();
        let st_i: Vec<usize> = rows.iter().map(|r| r.5).collect();
        assert_eq!(tssr_i, [6, 9, 8, 9, 8, 10, 9, 8, 10, 10, 10]);
        assert_eq!(spt_i, [6, 9, 10, 9, 10, 10, 9, 10, 10, 10, 10]);
        assert_eq!(st_i, spt_i);
        for r in &rows {
            assert!(r.0 == r.2 && r.0 == r.4);
        }
    }
}
