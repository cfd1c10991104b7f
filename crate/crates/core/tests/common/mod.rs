#![allow(dead_code)]

use batchsched::bench::{generate_instance, GenSpec};
use batchsched::matching::CompatGraph;
use batchsched::{Instance, Mode, Time};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DENSITIES: [f64; 5] = [12.5, 25.0, 50.0, 75.0, 100.0];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(rng: &mut ChaCha8Rng, n: usize, density_pct: f64) -> CompatGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density_pct / 100.0) {
                edges.push((i, j));
            }
        }
    }
    CompatGraph::new(n, &edges).unwrap()
}

pub fn density(rng: &mut ChaCha8Rng) -> f64 {
    *DENSITIES.choose(rng).unwrap()
}

/// Random instance with processing times drawn by `p`.
pub fn instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    mode: Mode,
    mut p: impl FnMut(&mut ChaCha8Rng) -> Time,
) -> Instance {
    let d = density(rng);
    let g = graph(rng, n, d);
    let times = (0..n).map(|_| p(rng)).collect();
    let s = rng.gen_range(0..=5);
    Instance::new(times, m, s, mode, g).unwrap()
}

/// Instance drawn like the benchmark grid: p in [10, 100], s in {2, 3, 4}.
pub fn bench_instance(n: usize, m: usize, density_pct: f64, seed: u64) -> Instance {
    generate_instance(&GenSpec {
        n,
        m,
        density_pct,
        p_range: (10, 100),
        s_choices: vec![2, 3, 4],
        mode: Mode::Max,
        seed,
    })
    .unwrap()
}
