//! Finite distributions over graphs and the per-vertex cover probabilities
//! they induce.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, WeightVector};
use crate::solver::mvc_canonical;

pub const PROB_SUM_TOL: f64 = 1e-12;

/// A finite-support probability distribution over graphs sharing one vertex
/// count. Probabilities are nonnegative and sum to one (within `PROB_SUM_TOL`).
#[derive(Clone, Debug, PartialEq)]
pub struct GraphDistribution {
    n: usize,
    support: Vec<(Graph, f64)>,
}

impl GraphDistribution {
    pub fn new(support: Vec<(Graph, f64)>) -> Result<GraphDistribution> {
        let Some((first, _)) = support.first() else {
            return Err(Error::ParamOutOfRange(
                "distribution support must be nonempty".into(),
            ));
        };
        let n = first.n();
        let mut total = 0.0;
        for (g, p) in &support {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    what: "distribution support graphs",
                    left: n,
                    right: g.n(),
                });
            }
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::ParamOutOfRange(format!(
                    "probability must be a nonnegative real, got {p}"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ParamOutOfRange(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(GraphDistribution { n, support })
    }

    pub fn point_mass(g: Graph) -> GraphDistribution {
        GraphDistribution { n: g.n(), support: vec![(g, 1.0)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(Graph, f64)] {
        &self.support
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Restrict every support graph to `V \ s`, merging elements that
    /// collapse to the same graph.
    pub fn restricted(&self, s: VertexSet) -> GraphDistribution {
        let mut merged: Vec<(Graph, f64)> = Vec::with_capacity(self.support.len());
        for (g, p) in &self.support {
            let r = g.residual(s);
            match merged.iter_mut().find(|(h, _)| *h == r) {
                Some((_, q)) => *q += p,
                None => merged.push((r, *p)),
            }
        }
        GraphDistribution { n: self.n, support: merged }
    }

    /// Expectation of `f` over the support.
    pub fn expect(&self, mut f: impl FnMut(&Graph) -> f64) -> f64 {
        self.support.iter().map(|(g, p)| p * f(g)).sum()
    }
}

/// Per-vertex probabilities of landing in the canonical minimum cover of
/// `e_a ∪ G` for `G` drawn from a distribution. Values live in [0, 1] and
/// sum to the expected minimum-cover size of the union.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverProbabilities {
    c: Vec<f64>,
}

impl CoverProbabilities {
    pub fn new(c: Vec<f64>) -> Result<CoverProbabilities> {
        for &x in &c {
            if !x.is_finite() || !(0.0..=1.0).contains(&x) {
                return Err(Error::ParamOutOfRange(format!(
                    "cover probability must lie in [0, 1], got {x}"
                )));
            }
        }
        Ok(CoverProbabilities { c })
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.c[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn sum(&self) -> f64 {
        self.c.iter().sum()
    }
}

/// c_v = Pr over `d_b` that v lies in the canonical minimum cover of
/// `e_a ∪ G_b`.
pub fn cover_probabilities(e_a: &Graph, d_b: &GraphDistribution) -> Result<CoverProbabilities> {
    if e_a.n() != d_b.n() {
        return Err(Error::DimensionMismatch {
            what: "base graph vs distribution",
            left: e_a.n(),
            right: d_b.n(),
        });
    }
    let mut c = vec![0.0; e_a.n()];
    for (g, p) in d_b.support() {
        let cover = mvc_canonical(&e_a.union(g)?);
        for v in cover.iter() {
            c[v] += p;
        }
    }
    for x in &mut c {
        *x = x.clamp(0.0, 1.0);
    }
    CoverProbabilities::new(c)
}

/// The response weights w_v = 1 − (2 − beta)·c_v. `beta` must lie in (0, 1].
pub fn weights_from_probs(c: &CoverProbabilities, beta: f64) -> Result<WeightVector> {
    if !beta.is_finite() || !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    WeightVector::new(c.values().iter().map(|&cv| 1.0 - (2.0 - beta) * cv).collect())
}

/// E over the distribution of the minimum-cover size.
pub fn expected_mvc_size(d: &GraphDistribution) -> f64 {
    d.expect(|g| crate::solver::mvc_size(g) as f64)
}
