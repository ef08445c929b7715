//! Random unit-disk instances.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MistError, Result};
use crate::graph::{Graph, GraphBuilder};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitDiskParams {
    pub nodes: usize,
    pub radius: f64,
    pub functions: usize,
    pub seed: u64,
}

/// Drops `n` points uniformly in the unit square and links every pair at
/// Euclidean distance ≤ `radius`, using that distance as the link length.
/// Functions `F1..Fk` go to `k` distinct random nodes. The output may be
/// disconnected.
pub fn generate_unit_disk(n: usize, radius: f64, k_functions: usize, seed: u64) -> Result<Graph> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(MistError::InvalidGenerator(format!(
            "radius {radius} must lie in (0, 1]"
        )));
    }
    if k_functions > n {
        return Err(MistError::InvalidGenerator(format!(
            "{k_functions} functions cannot be placed on {n} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let mut hosts = vec![None; n];
    for (f, node) in index::sample(&mut rng, n, k_functions).into_iter().enumerate() {
        hosts[node] = Some(format!("F{}", f + 1));
    }

    let width = n.to_string().len();
    let name = |i: usize| format!("N{:0width$}", i + 1);
    let mut b = GraphBuilder::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        b.node_full(name(i), hosts[i].clone(), Some(x), Some(y));
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1);
            if d <= radius {
                b.edge(name(i), name(j), d);
            }
        }
    }
    b.build()
}

impl UnitDiskParams {
    pub fn generate(&self) -> Result<Graph> {
        generate_unit_disk(self.nodes, self.radius, self.functions, self.seed)
    }
}
