//! Exact vertex-cover solvers.
//!
//! All of them are branch-and-bound over bitmask subgraphs, tuned for the
//! graph sizes this crate cares about (exact work tops out around twenty
//! vertices). The canonical and weighted variants reduce to constrained
//! feasibility queries so that tie-breaking stays a one-rule affair:
//! lexicographically smallest sorted vertex list wins.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, WeightVector};

/// Default vertex cap for minimal-cover enumeration.
pub const ENUM_CAP: usize = 16;

/// Greedy maximal matching size within `alive`; a lower bound on the cover
/// size of the induced subgraph.
fn matching_lower_bound(adj: &[u64], alive: u64) -> u32 {
    let mut free = alive;
    let mut size = 0u32;
    while free != 0 {
        let u = free.trailing_zeros() as usize;
        free &= free - 1;
        let nbrs = adj[u] & free;
        if nbrs != 0 {
            let v = nbrs.trailing_zeros();
            free &= !(1u64 << v);
            size += 1;
        }
    }
    size
}

fn max_degree_vertex(adj: &[u64], alive: u64) -> Option<usize> {
    let mut best = None;
    let mut best_deg = 0u32;
    let mut scan = alive;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let deg = (adj[u] & alive).count_ones();
        if deg > best_deg {
            best_deg = deg;
            best = Some(u);
        }
    }
    best
}

fn bb_size(adj: &[u64], alive: u64, current: u32, best: &mut u32) {
    if current >= *best {
        return;
    }
    let Some(u) = max_degree_vertex(adj, alive) else {
        // No edges left.
        *best = current;
        return;
    };
    if current + matching_lower_bound(adj, alive) >= *best {
        return;
    }
    let nbrs = adj[u] & alive;
    // Exclude u: every live neighbor must join the cover.
    bb_size(adj, alive & !(1 << u) & !nbrs, current + nbrs.count_ones(), best);
    // Include u.
    bb_size(adj, alive & !(1 << u), current + 1, best);
}

/// Force `exclude`d endpoints' partners into the cover. Returns the grown
/// include mask, or None when two excluded vertices share an edge.
fn propagate(adj: &[u64], include: u64, exclude: u64) -> Option<u64> {
    let mut forced = 0u64;
    let mut scan = exclude;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        forced |= adj[u];
    }
    if forced & exclude != 0 {
        return None;
    }
    Some(include | (forced & !include))
}

/// Minimum size of a cover containing `include` and avoiding `exclude`,
/// or None when no such cover exists.
fn min_cover_size_constrained(g: &Graph, include: u64, exclude: u64) -> Option<u32> {
    debug_assert_eq!(include & exclude, 0);
    let adj = (0..g.n()).map(|v| g.adjacency(v)).collect::<Vec<_>>();
    let include = propagate(&adj, include, exclude)?;
    if include & exclude != 0 {
        return None;
    }
    let alive = VertexSet::full(g.n()).bits() & !include & !exclude;
    let mut best = alive.count_ones() + 1;
    bb_size(&adj, alive, 0, &mut best);
    Some(include.count_ones() + best)
}

/// Size of a minimum vertex cover.
pub fn mvc_size(g: &Graph) -> usize {
    min_cover_size_constrained(g, 0, 0).expect("unconstrained cover always exists") as usize
}

/// The canonical minimum vertex cover: among all covers of minimum size,
/// the lexicographically smallest sorted vertex list.
///
/// Built greedily: walk vertices in ascending order and keep any vertex that
/// still admits a completion at the optimal size; once the chosen prefix is
/// itself an optimal cover, everything later is rejected.
pub fn mvc_canonical(g: &Graph) -> VertexSet {
    let tau = mvc_size(g) as u32;
    let mut chosen = VertexSet::EMPTY;
    let mut rejected = 0u64;
    for v in 0..g.n() {
        if chosen.len() as u32 == tau && g.is_covered_by(chosen) {
            break;
        }
        let with_v = chosen.bits() | 1 << v;
        match min_cover_size_constrained(g, with_v, rejected) {
            Some(size) if size == tau => chosen = VertexSet::from_bits(with_v),
            _ => rejected |= 1 << v,
        }
    }
    debug_assert!(g.is_covered_by(chosen));
    chosen
}

fn weighted_matching_bound(adj: &[u64], w: &[f64], alive: u64) -> f64 {
    let mut free = alive;
    let mut bound = 0.0;
    while free != 0 {
        let u = free.trailing_zeros() as usize;
        free &= free - 1;
        let nbrs = adj[u] & free;
        if nbrs != 0 {
            let v = nbrs.trailing_zeros() as usize;
            free &= !(1u64 << v);
            bound += w[u].min(w[v]);
        }
    }
    bound
}

fn bb_weight(adj: &[u64], w: &[f64], alive: u64, current: f64, best: &mut f64) {
    let Some(u) = max_degree_vertex(adj, alive) else {
        if current < *best {
            *best = current;
        }
        return;
    };
    if current + weighted_matching_bound(adj, w, alive) >= *best {
        return;
    }
    let nbrs = adj[u] & alive;
    let mut nbr_weight = 0.0;
    let mut scan = nbrs;
    while scan != 0 {
        let x = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        nbr_weight += w[x];
    }
    bb_weight(adj, w, alive & !(1 << u) & !nbrs, current + nbr_weight, best);
    bb_weight(adj, w, alive & !(1 << u), current + w[u], best);
}

/// Minimum total weight over covers containing `include` and avoiding
/// `exclude`. Strictly negative free vertices are always taken: they only
/// improve the objective and covering is monotone under supersets.
fn min_cover_weight_constrained(
    g: &Graph,
    w: &[f64],
    include: u64,
    exclude: u64,
) -> Option<f64> {
    debug_assert_eq!(include & exclude, 0);
    let adj = (0..g.n()).map(|v| g.adjacency(v)).collect::<Vec<_>>();
    let mut include = propagate(&adj, include, exclude)?;
    if include & exclude != 0 {
        return None;
    }
    let mut alive = VertexSet::full(g.n()).bits() & !include & !exclude;
    let mut scan = alive;
    while scan != 0 {
        let v = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        if w[v] < 0.0 {
            include |= 1 << v;
            alive &= !(1u64 << v);
        }
    }
    // Edges already covered by `include` are irrelevant; mask them out by
    // restricting adjacency to live vertices only.
    let masked: Vec<u64> = adj.iter().map(|&a| a & alive).collect();
    let base: f64 = VertexSet::from_bits(include).iter().map(|v| w[v]).sum();
    let mut best = f64::INFINITY;
    bb_weight(&masked, w, alive, 0.0, &mut best);
    Some(base + best)
}

const WEIGHT_TIE_TOL: f64 = 1e-9;

/// Minimum-weight vertex cover. All strictly negative vertices are included;
/// among minimum-weight covers the lexicographically smallest sorted vertex
/// list is returned (so no gratuitous zero-weight padding).
pub fn min_weight_vc(g: &Graph, w: &WeightVector) -> Result<VertexSet> {
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch {
            what: "weight vector vs graph",
            left: w.len(),
            right: g.n(),
        });
    }
    let ws = w.values();
    let optimum = min_cover_weight_constrained(g, ws, 0, 0)
        .expect("unconstrained cover always exists");
    let mut chosen = VertexSet::EMPTY;
    let mut rejected = 0u64;
    for v in 0..g.n() {
        // A finished prefix at optimal weight beats every proper extension.
        if g.is_covered_by(chosen) && w.total(chosen) <= optimum + WEIGHT_TIE_TOL {
            break;
        }
        let with_v = chosen.bits() | 1 << v;
        match min_cover_weight_constrained(g, ws, with_v, rejected) {
            Some(value) if value <= optimum + WEIGHT_TIE_TOL => {
                chosen = VertexSet::from_bits(with_v)
            }
            _ => rejected |= 1 << v,
        }
    }
    debug_assert!(g.is_covered_by(chosen));
    Ok(chosen)
}

/// Take edges greedily in the given order; matched endpoints form the cover.
/// `order` must be a permutation of the graph's edge list.
pub fn greedy_matching_cover(g: &Graph, order: &[(usize, usize)]) -> VertexSet {
    let mut sorted: Vec<(usize, usize)> = order
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    sorted.sort_unstable();
    assert_eq!(
        sorted,
        g.edges(),
        "edge order must be a permutation of the graph's edges"
    );
    let mut matched = VertexSet::EMPTY;
    for &(a, b) in order {
        if !matched.contains(a) && !matched.contains(b) {
            matched.insert(a);
            matched.insert(b);
        }
    }
    matched
}

/// All inclusion-minimal vertex covers, as complements of maximal
/// independent sets. Deterministic order: ascending (size, lexicographic).
pub fn enumerate_minimal_vertex_covers(g: &Graph) -> Result<Vec<VertexSet>> {
    enumerate_minimal_vertex_covers_capped(g, ENUM_CAP)
}

pub fn enumerate_minimal_vertex_covers_capped(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let full = VertexSet::full(n).bits();
    let mut covers = Vec::new();
    for mask in 0..=full {
        let mut independent = true;
        let mut maximal = true;
        for v in 0..n {
            let bit = 1u64 << v;
            if mask & bit != 0 {
                if g.adjacency(v) & mask != 0 {
                    independent = false;
                    break;
                }
            } else if g.adjacency(v) & mask == 0 {
                // v could join the independent set, so mask is not maximal.
                maximal = false;
            }
        }
        if independent && maximal {
            covers.push(VertexSet::from_bits(full & !mask));
        }
        if mask == full {
            break; // avoid wrap when n == 64 is impossible but n == cap is fine
        }
    }
    covers.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(covers)
}
