//! Undirected graphs on at most 64 vertices, with bitmask vertex sets.
//!
//! Everything downstream (exact solvers, games, the protocol) works at desk
//! scale, so vertices are bit indices into a `u64` and adjacency is a mask
//! per vertex. Edges are stored normalized: `u < v`, sorted, no duplicates.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Hard limit imposed by the bitmask representation.
pub const MAX_VERTICES: usize = 64;

/// A set of vertices, bit-indexed against a graph's vertex count.
///
/// Ordering is lexicographic on the sorted vertex list ({0,2} < {1}, and a
/// proper prefix sorts first), which is the tie-break rule used everywhere
/// a canonical set is needed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    bits: u64,
}

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet { bits: 0 };

    pub fn from_bits(bits: u64) -> Self {
        VertexSet { bits }
    }

    pub fn of(vertices: &[usize]) -> Self {
        let mut bits = 0u64;
        for &v in vertices {
            assert!(v < MAX_VERTICES, "vertex {v} out of range");
            bits |= 1 << v;
        }
        VertexSet { bits }
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet { bits: u64::MAX }
        } else {
            VertexSet { bits: (1u64 << n) - 1 }
        }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.bits >> v & 1 == 1
    }

    #[must_use]
    pub fn with(self, v: usize) -> Self {
        assert!(v < MAX_VERTICES);
        VertexSet { bits: self.bits | 1 << v }
    }

    #[must_use]
    pub fn without(self, v: usize) -> Self {
        assert!(v < MAX_VERTICES);
        VertexSet { bits: self.bits & !(1 << v) }
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < MAX_VERTICES);
        self.bits |= 1 << v;
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        VertexSet { bits: self.bits | other.bits }
    }

    #[must_use]
    pub fn intersect(self, other: Self) -> Self {
        VertexSet { bits: self.bits & other.bits }
    }

    #[must_use]
    pub fn minus(self, other: Self) -> Self {
        VertexSet { bits: self.bits & !other.bits }
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Vertices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        BitIter { bits: self.bits }
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

struct BitIter {
    bits: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let v = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(v)
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on the ascending vertex lists; prefixes sort first.
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// An undirected graph: `n` vertices, a normalized edge list, and per-vertex
/// adjacency masks. No self-loops, no duplicate edges.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
}

impl Graph {
    /// Build a graph from an edge list. Endpoints are validated; duplicate
    /// mentions of the same edge collapse (edge sets, not multisets).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: n, max: MAX_VERTICES });
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::EdgeOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adj = vec![0u64; n];
        for &(u, v) in &norm {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).expect("empty graph is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edges(&self) -> bool {
        !self.edges.is_empty()
    }

    /// Adjacency mask of `v`.
    pub fn adjacency(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Vertices incident to at least one edge.
    pub fn support(&self) -> VertexSet {
        let mut bits = 0u64;
        for (v, &a) in self.adj.iter().enumerate() {
            if a != 0 {
                bits |= 1 << v;
            }
        }
        VertexSet::from_bits(bits)
    }

    /// The graph induced on `V \ s`: same vertex count, keeping exactly the
    /// edges with both endpoints outside `s`.
    pub fn residual(&self, s: VertexSet) -> Graph {
        let kept: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| !s.contains(u) && !s.contains(v))
            .collect();
        Graph::new(self.n, &kept).expect("residual edges are already valid")
    }

    /// Edge-set union of two graphs on the same vertex count.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                what: "graph union",
                left: self.n,
                right: other.n,
            });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Graph::new(self.n, &edges)
    }

    /// Does `s` touch every edge?
    pub fn is_covered_by(&self, s: VertexSet) -> bool {
        self.edges.iter().all(|&(u, v)| s.contains(u) || s.contains(v))
    }
}

/// Per-vertex real weights; finite, negatives allowed.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightVector {
    values: Vec<f64>,
}

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<WeightVector> {
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::ParamOutOfRange(format!(
                "weights must be finite, got {bad}"
            )));
        }
        Ok(WeightVector { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.values[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Total weight of a vertex set.
    pub fn total(&self, s: VertexSet) -> f64 {
        s.iter().map(|v| self.values[v]).sum()
    }
}
