//! Generators and brute-force reference solvers for the acceptance suite.
//!
//! The reference solvers deliberately avoid the library's search code: they
//! scan all `2^n` vertex subsets against the raw edge list, so a bug in the
//! branch-and-bound solver cannot hide itself.

use kcover::{
    run_protocol, Graph, JointAdversary, OracleStrategy, ProtocolConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(n: usize, edge_prob: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are in range")
}

pub fn nonempty_random_graph(n: usize, edge_prob: f64, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let g = random_graph(n, edge_prob, rng);
        if g.has_edges() {
            return g;
        }
    }
}

/// Smallest cover size, by scanning every vertex subset.
pub fn brute_mvc_size(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20, "subset scan is for small graphs");
    let masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(u, v)| (1u64 << u) | (1u64 << v))
        .collect();
    let mut best = n;
    for s in 0..(1u64 << n) {
        if masks.iter().all(|&e| e & s != 0) && (s.count_ones() as usize) < best {
            best = s.count_ones() as usize;
        }
    }
    best
}

/// Smallest total weight over every covering subset, same scan. Negative
/// weights mean the minimizer need not be inclusion-minimal.
pub fn brute_min_cover_weight(g: &Graph, weights: &[f64]) -> f64 {
    let n = g.n();
    assert!(n <= 20, "subset scan is for small graphs");
    let masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(u, v)| (1u64 << u) | (1u64 << v))
        .collect();
    let mut best = f64::INFINITY;
    for s in 0..(1u64 << n) {
        if masks.iter().all(|&e| e & s != 0) {
            let w: f64 = (0..n).filter(|&v| s & (1 << v) != 0).map(|v| weights[v]).sum();
            if w < best {
                best = w;
            }
        }
    }
    best
}

/// Random joint adversary over the later parties' slices, with normalized
/// probabilities.
pub fn random_adversary(
    n: usize,
    k: usize,
    support_size: usize,
    edge_prob: f64,
    rng: &mut ChaCha8Rng,
) -> JointAdversary {
    let mut support = Vec::with_capacity(support_size);
    let mut total = 0.0;
    for _ in 0..support_size {
        let parts: Vec<Graph> = (0..k - 1).map(|_| random_graph(n, edge_prob, rng)).collect();
        let p: f64 = rng.gen_range(0.05..1.0);
        total += p;
        support.push((parts, p));
    }
    for (_, p) in &mut support {
        *p /= total;
    }
    JointAdversary::new(n, k, support).expect("normalized support is valid")
}

/// Exact ratio of expectations for an oracle-mode run against `adv`: one
/// strategy provider shared across every support world, outputs and optima
/// averaged with the world probabilities.
pub fn oracle_expected_ratio(part1: &Graph, adv: JointAdversary, cfg: &ProtocolConfig) -> f64 {
    let worlds = adv.instances(part1).expect("first slice matches the adversary");
    let mut provider = OracleStrategy::new(adv);
    let mut e_out = 0.0;
    let mut e_opt = 0.0;
    for (inst, p) in &worlds {
        let report = run_protocol(inst, cfg, &mut provider).expect("protocol run");
        assert!(report.valid, "output fails to cover a support world");
        e_out += p * report.output_size as f64;
        e_opt += p * report.opt as f64;
    }
    assert!(e_opt > 1e-12, "expected optimum must be positive");
    e_out / e_opt
}
