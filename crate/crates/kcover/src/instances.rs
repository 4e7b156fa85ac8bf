//! Instance generators: the layered greedy trap, bipartite graphs carrying
//! induced-matching families, the two-party lower-bound construction built
//! from them, and random partitioned benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::protocol::PartitionedInstance;

/// Three-party instance on `4m` vertices that punishes greedy matching:
/// blocks A, B, C, D of `m` vertices, party 1 holds a perfect matching
/// A–B, party 2 a perfect matching C–D, party 3 the clique on `B ∪ C`.
/// The optimum is `B ∪ C` itself, size `2m`; taking both matchings whole
/// costs all `4m` vertices.
pub fn layered_instance(m: usize) -> PartitionedInstance {
    assert!(m >= 1, "block size must be positive");
    assert!(4 * m <= crate::graph::MAX_VERTICES, "instance too large");
    let n = 4 * m;
    let a = |j: usize| j;
    let b = |j: usize| m + j;
    let c = |j: usize| 2 * m + j;
    let d = |j: usize| 3 * m + j;
    let m1: Vec<(usize, usize)> = (0..m).map(|j| (a(j), b(j))).collect();
    let m2: Vec<(usize, usize)> = (0..m).map(|j| (c(j), d(j))).collect();
    let mut clique = Vec::new();
    for u in m..3 * m {
        for v in (u + 1)..3 * m {
            clique.push((u, v));
        }
    }
    PartitionedInstance::new(vec![
        Graph::new(n, &m1).expect("valid matching"),
        Graph::new(n, &m2).expect("valid matching"),
        Graph::new(n, &clique).expect("valid clique"),
    ])
    .expect("parts share n")
}

/// The middle blocks `B ∪ C` of a layered instance — its optimal cover.
pub fn layered_optimal_cover(m: usize) -> VertexSet {
    (m..3 * m).collect()
}

/// A bipartite graph whose edge set is a disjoint union of pairwise
/// induced matchings: no graph edge joins two vertices matched by the same
/// matching except that matching's own edges.
#[derive(Clone, Debug)]
pub struct RsGraph {
    /// Sides are `P = 0..n_side` and `Q = n_side..2·n_side`.
    pub graph: Graph,
    pub n_side: usize,
    /// Each matching as `(p, q)` pairs, `p ∈ P`, `q ∈ Q`.
    pub matchings: Vec<Vec<(usize, usize)>>,
}

impl RsGraph {
    /// Check the defining property directly against the edge list.
    pub fn matchings_are_induced(&self) -> bool {
        self.matchings.iter().all(|m| {
            let mut matched = VertexSet::EMPTY;
            for &(p, q) in m {
                matched.insert(p);
                matched.insert(q);
            }
            self.graph
                .edges()
                .iter()
                .filter(|&&(u, v)| matched.contains(u) && matched.contains(v))
                .all(|&(u, v)| m.contains(&(u, v)) || m.contains(&(v, u)))
        })
    }
}

const RS_SEARCH_RESTARTS: usize = 20_000;

/// Randomized greedy search for `k_m` pairwise induced matchings of size
/// `match_size` on a `2·n_side`-vertex bipartite vertex set. Each restart
/// grows the matchings in random order and keeps an edge only if it stays
/// vertex-disjoint within its own matching and never lands both endpoints
/// inside another matching's vertex set.
pub fn find_rs_graph(
    n_side: usize,
    k_m: usize,
    match_size: usize,
    seed: u64,
) -> Result<RsGraph> {
    if n_side == 0 || n_side > 16 {
        return Err(Error::ParamOutOfRange(format!(
            "side size {n_side} out of range (1..=16)"
        )));
    }
    if k_m == 0 || match_size == 0 {
        return Err(Error::ParamOutOfRange(
            "need at least one matching of at least one edge".into(),
        ));
    }
    if match_size > n_side {
        return Err(Error::NotFound(format!(
            "matchings of size {match_size} cannot fit on a side of {n_side}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_pairs: Vec<(usize, usize)> = (0..n_side)
        .flat_map(|p| (0..n_side).map(move |q| (p, n_side + q)))
        .collect();
    for _ in 0..RS_SEARCH_RESTARTS {
        let mut matchings: Vec<Vec<(usize, usize)>> = Vec::with_capacity(k_m);
        let mut vertex_sets: Vec<VertexSet> = Vec::with_capacity(k_m);
        let mut ok = true;
        for _ in 0..k_m {
            let mut order = all_pairs.clone();
            order.shuffle(&mut rng);
            let mut current = Vec::with_capacity(match_size);
            let mut current_vs = VertexSet::EMPTY;
            for &(p, q) in &order {
                if current.len() == match_size {
                    break;
                }
                if current_vs.contains(p) || current_vs.contains(q) {
                    continue;
                }
                // Both endpoints inside an earlier matching's vertex set
                // would break that matching's induced property...
                if vertex_sets
                    .iter()
                    .any(|vs| vs.contains(p) && vs.contains(q))
                {
                    continue;
                }
                // ...and an earlier edge inside this matching's grown
                // vertex set would break this one's.
                let grown = current_vs.with(p).with(q);
                if matchings.iter().flatten().any(|&(u, v)| {
                    grown.contains(u) && grown.contains(v)
                }) {
                    continue;
                }
                current.push((p, q));
                current_vs = grown;
            }
            if current.len() < match_size {
                ok = false;
                break;
            }
            matchings.push(current);
            vertex_sets.push(current_vs);
        }
        if ok {
            let edges: Vec<(usize, usize)> =
                matchings.iter().flatten().copied().collect();
            let graph = Graph::new(2 * n_side, &edges)?;
            let rs = RsGraph { graph, n_side, matchings };
            debug_assert!(rs.matchings_are_induced());
            return Ok(rs);
        }
    }
    Err(Error::NotFound(format!(
        "no {k_m} induced matchings of size {match_size} on side {n_side} within budget"
    )))
}

/// An induced-matching family together with the sampling parameters of the
/// two-party construction built on it.
#[derive(Clone, Debug)]
pub struct RsInstanceFamily {
    pub rs: RsGraph,
    /// Matching-size deficit: `match_size = (1/2 − eps1)·n_side`.
    pub eps1: f64,
    /// Fraction of each matching sampled into the first party's slice.
    pub eps2: f64,
}

impl RsInstanceFamily {
    pub fn new(rs: RsGraph, eps2: f64) -> Result<RsInstanceFamily> {
        if !eps2.is_finite() || !(eps2 > 0.0 && eps2 <= 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "eps2 must lie in (0, 1], got {eps2}"
            )));
        }
        let match_size = rs.matchings.first().map_or(0, |m| m.len());
        let eps1 = 0.5 - match_size as f64 / rs.n_side as f64;
        Ok(RsInstanceFamily { rs, eps1, eps2 })
    }

    /// Edges sampled from each matching: `⌈eps2 · match_size⌉`.
    pub fn sample_size(&self) -> usize {
        let match_size = self.rs.matchings.first().map_or(0, |m| m.len());
        (self.eps2 * match_size as f64).ceil() as usize
    }
}

/// One draw of the two-party lower-bound construction.
#[derive(Clone, Debug)]
pub struct RsLowerBoundInstance {
    /// Party 1: the sampled matching fragments. Party 2: the padding
    /// matchings onto the fresh vertices.
    pub instance: PartitionedInstance,
    /// The index of the distinguished matching.
    pub r: usize,
    /// A certified cover: sampled `M_r` endpoints in `P`, plus every `P`
    /// and `Q` vertex not matched by `M_r`.
    pub witness: VertexSet,
    /// Total sampled edge count, `k_m · ⌈eps2 · match_size⌉`.
    pub e1_size: usize,
}

/// Build the two-party instance: sample an `eps2`-fraction of every
/// matching (party 1), pick a distinguished matching `M_r`, and pad with
/// perfect matchings from fresh vertices `P′`, `Q′` onto the `M_r`-unmatched
/// halves of `P` and `Q` (party 2).
pub fn rs_lower_bound_instance(
    family: &RsInstanceFamily,
    seed: u64,
) -> Result<RsLowerBoundInstance> {
    let rs = &family.rs;
    let n_side = rs.n_side;
    let k_m = rs.matchings.len();
    let match_size = rs.matchings.first().map_or(0, |m| m.len());
    let pad = n_side - match_size;
    let n = 2 * n_side + 2 * pad;
    let p_prime = |j: usize| 2 * n_side + j;
    let q_prime = |j: usize| 2 * n_side + pad + j;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.gen_range(0..k_m);
    let take = family.sample_size();

    let mut e1 = Vec::new();
    let mut sampled_r: Vec<(usize, usize)> = Vec::new();
    for (i, matching) in rs.matchings.iter().enumerate() {
        let mut edges = matching.clone();
        edges.shuffle(&mut rng);
        edges.truncate(take);
        if i == r {
            sampled_r = edges.clone();
        }
        e1.extend(edges);
    }
    let e1_size = e1.len();

    let matched_p: VertexSet = rs.matchings[r].iter().map(|&(p, _)| p).collect();
    let matched_q: VertexSet = rs.matchings[r].iter().map(|&(_, q)| q).collect();
    let p_rest: Vec<usize> = (0..n_side).filter(|&v| !matched_p.contains(v)).collect();
    let q_rest: Vec<usize> = (n_side..2 * n_side)
        .filter(|&v| !matched_q.contains(v))
        .collect();
    let mut e2 = Vec::new();
    for (j, &p) in p_rest.iter().enumerate() {
        e2.push((p_prime(j), p));
    }
    for (j, &q) in q_rest.iter().enumerate() {
        e2.push((q_prime(j), q));
    }

    let mut witness: VertexSet = sampled_r.iter().map(|&(p, _)| p).collect();
    for &v in &p_rest {
        witness.insert(v);
    }
    for &v in &q_rest {
        witness.insert(v);
    }

    let instance = PartitionedInstance::new(vec![
        Graph::new(n, &e1)?,
        Graph::new(n, &e2)?,
    ])?;
    Ok(RsLowerBoundInstance { instance, r, witness, e1_size })
}

/// Uniform random instance: each vertex pair becomes an edge with
/// probability `edge_prob`, and each edge lands on a uniformly random
/// party. Capped at `n ≤ 14` to keep exact solving instant.
pub fn random_partitioned_instance(
    n: usize,
    edge_prob: f64,
    k: usize,
    seed: u64,
) -> Result<PartitionedInstance> {
    if n > 14 {
        return Err(Error::ParamOutOfRange(format!(
            "random instances are capped at 14 vertices, got {n}"
        )));
    }
    if k < 1 {
        return Err(Error::ParamOutOfRange("k must be at least 1".into()));
    }
    if !edge_prob.is_finite() || !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::ParamOutOfRange(format!(
            "edge probability must lie in [0, 1], got {edge_prob}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_party: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                per_party[rng.gen_range(0..k)].push((u, v));
            }
        }
    }
    PartitionedInstance::new(
        per_party
            .into_iter()
            .map(|edges| Graph::new(n, &edges))
            .collect::<Result<_>>()?,
    )
}
