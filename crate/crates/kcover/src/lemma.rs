//! Executable checks for the two inequalities behind the weighted-response
//! analysis, plus the threshold construction and randomized two-sided cover
//! used in their proofs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{cover_probabilities, weights_from_probs, CoverProbabilities, GraphDistribution};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::solver::{min_weight_vc, mvc_canonical};

/// Slack for the step-function comparisons in `middle_region_check`, so
/// supports built to satisfy the condition with exact real arithmetic are
/// not rejected over rounding.
const CONDITION_TOL: f64 = 1e-12;

/// Slack for slice-boundary membership: a mirrored checkpoint `x = 1 − y`
/// must still count `y` in the lower slice even though `1 − x` rounds a few
/// ulps away from `y`.
const INCLUDE_TOL: f64 = 1e-12;

/// Slack for band membership around the threshold; near-ties land in the
/// middle band, mirroring the convention that exact ties do.
const BAND_TOL: f64 = 1e-9;

/// A finitely supported weight function on `(0, 1]`.
///
/// Entries with zero weight are dropped; duplicate points are merged.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFunction {
    points: Vec<(f64, f64)>,
}

impl SupportFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Result<SupportFunction> {
        for &(y, w) in &points {
            if !y.is_finite() || !(y > 0.0 && y <= 1.0) {
                return Err(Error::InvalidSupport(format!(
                    "support point {y} outside (0, 1]"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidSupport(format!(
                    "weight {w} at {y} is not a finite nonnegative value"
                )));
            }
        }
        let mut pts: Vec<(f64, f64)> = points.into_iter().filter(|&(_, w)| w > 0.0).collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite keys"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for (y, w) in pts {
            match merged.last_mut() {
                Some((py, pw)) if *py == y => *pw += w,
                _ => merged.push((y, w)),
            }
        }
        Ok(SupportFunction { points: merged })
    }

    /// Support points with their weights, ascending by point.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `Σ w(y)·y`, the first moment the condition compares slices of.
    pub fn total_moment(&self) -> f64 {
        self.points.iter().map(|&(y, w)| w * y).sum()
    }
}

/// What `middle_region_check` reports.
#[derive(Clone, Copy, Debug)]
pub struct MiddleRegionOutcome {
    /// Whether `Σ_{y ∈ [x,1]} w(y)·y ≥ Σ_{y ∈ (0,1−x]} w(y)·y` for all
    /// `x ∈ [1/2, 1]`.
    pub condition_holds: bool,
    /// `Σ w(y)·y·(1 − 2y)`, which the condition forces to be nonpositive.
    pub conclusion_value: f64,
}

/// Checks the mass-dominance condition and evaluates its conclusion.
///
/// Both sides of the condition are step functions of `x`, constant on the
/// half-open spans between consecutive breakpoints — the support points and
/// their reflections `1 − y` — and each span takes its value at its right
/// endpoint. Checking `x = 1/2` plus every breakpoint in `(1/2, 1]` (with
/// `1` always included) therefore decides the whole interval.
pub fn middle_region_check(w: &SupportFunction) -> MiddleRegionOutcome {
    let pts = w.points();
    let conclusion_value = pts
        .iter()
        .map(|&(y, wy)| wy * y * (1.0 - 2.0 * y))
        .sum::<f64>();
    let mut xs: Vec<f64> = vec![0.5, 1.0];
    for &(y, _) in pts {
        if y >= 0.5 {
            xs.push(y);
        }
        let mirror = 1.0 - y;
        if mirror >= 0.5 {
            xs.push(mirror);
        }
    }
    let condition_holds = xs.iter().all(|&x| {
        let upper: f64 = pts
            .iter()
            .filter(|&&(y, _)| y >= x - INCLUDE_TOL)
            .map(|&(y, wy)| wy * y)
            .sum();
        let lower: f64 = pts
            .iter()
            .filter(|&&(y, _)| y <= 1.0 - x + INCLUDE_TOL)
            .map(|&(y, wy)| wy * y)
            .sum();
        upper >= lower - CONDITION_TOL
    });
    MiddleRegionOutcome { condition_holds, conclusion_value }
}

/// A support function drawn uniformly at random: up to `max_points` points
/// on a centesimal grid with weights in `[0, 10]`. Satisfies nothing by
/// construction; pair with rejection on [`middle_region_check`].
pub fn random_support(seed: u64, max_points: usize) -> SupportFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_points.max(1));
    let mut pts = Vec::with_capacity(k);
    for _ in 0..k {
        let y = rng.gen_range(1..=100) as f64 / 100.0;
        let w = rng.gen_range(0.0..10.0);
        pts.push((y, w));
    }
    SupportFunction::new(pts).expect("grid points are in range")
}

/// A support function that satisfies the mass-dominance condition by
/// construction: mass in the upper half plus mirror pairs whose weights are
/// scaled so each pair contributes equal moment to both sides.
pub fn random_mirrored_support(seed: u64) -> SupportFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    for _ in 0..rng.gen_range(0..=4usize) {
        let y = rng.gen_range(50..=100) as f64 / 100.0;
        pts.push((y, rng.gen_range(0.0..10.0)));
    }
    for _ in 0..rng.gen_range(0..=4usize) {
        let y0 = rng.gen_range(1..=49) as f64 / 100.0;
        let w0 = rng.gen_range(0.0..10.0);
        let y1 = 1.0 - y0;
        pts.push((y0, w0));
        pts.push((y1, w0 * y0 / y1));
    }
    if pts.is_empty() {
        pts.push((1.0, 1.0));
    }
    SupportFunction::new(pts).expect("constructed points are in range")
}

/// The smallest threshold `t ∈ [1/2, 1]` with
/// `Σ_{v: c_v > t} c_v ≤ Σ_{v: c_v < 1−t} c_v`.
///
/// Both sums are step functions of `t`, constant between consecutive values
/// of `{c_v} ∪ {1 − c_v}`, so scanning that candidate set (plus `1/2` and
/// `1`, the latter always satisfying) is exact.
pub fn threshold_t(c: &CoverProbabilities) -> f64 {
    let mut candidates: Vec<f64> = vec![0.5, 1.0];
    for &cv in c.values() {
        if (0.5..=1.0).contains(&cv) {
            candidates.push(cv);
        }
        let m = 1.0 - cv;
        if (0.5..=1.0).contains(&m) {
            candidates.push(m);
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    candidates.dedup();
    for &t in &candidates {
        let above: f64 = c.values().iter().filter(|&&cv| cv > t).sum();
        let below: f64 = c.values().iter().filter(|&&cv| cv < 1.0 - t).sum();
        if above <= below {
            return t;
        }
    }
    1.0
}

/// The three vertex bands induced by the threshold.
#[derive(Clone, Debug)]
pub struct ThresholdBands {
    pub t: f64,
    /// `c_v < 1 − t`: never taken.
    pub s1: VertexSet,
    /// `1 − t ≤ c_v ≤ t`: taken exactly when the drawn completion's
    /// canonical cover takes them. Ties at the boundaries land here.
    pub s2: VertexSet,
    /// `c_v > t`: always taken.
    pub s3: VertexSet,
}

/// Partition vertices by cover probability relative to `threshold_t(c)`.
pub fn threshold_bands(c: &CoverProbabilities) -> ThresholdBands {
    let t = threshold_t(c);
    let mut s1 = VertexSet::EMPTY;
    let mut s2 = VertexSet::EMPTY;
    let mut s3 = VertexSet::EMPTY;
    for (v, &cv) in c.values().iter().enumerate() {
        if cv < 1.0 - t - BAND_TOL {
            s1.insert(v);
        } else if cv > t + BAND_TOL {
            s3.insert(v);
        } else {
            s2.insert(v);
        }
    }
    ThresholdBands { t, s1, s2, s3 }
}

/// What `weight_bound_check` reports.
#[derive(Clone, Copy, Debug)]
pub struct WeightBoundOutcome {
    /// Total response weight `Σ_{v ∈ X} (1 − (2−β)·c_v)`.
    pub lhs: f64,
    /// `(β/2)·Σ_v c_v`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks that the minimum-weight response to a completion distribution has
/// weight at most `(β/2)·Σ_v c_v`.
pub fn weight_bound_check(
    e_a: &Graph,
    d_b: &GraphDistribution,
    beta: f64,
) -> Result<WeightBoundOutcome> {
    let c = cover_probabilities(e_a, d_b)?;
    let w = weights_from_probs(&c, beta)?;
    let x = min_weight_vc(e_a, &w)?;
    let lhs = w.total(x);
    let rhs = beta / 2.0 * c.sum();
    Ok(WeightBoundOutcome { lhs, rhs, holds: lhs <= rhs + 1e-12 })
}

/// One draw of the two-sided randomized cover: the always-taken high band
/// plus the drawn completion's canonical cover restricted to the middle
/// band. Errors if the result fails to cover `e_a`, which cannot happen
/// when the probabilities come from an actual completion distribution.
pub fn randomized_cover_once(
    e_a: &Graph,
    d_b: &GraphDistribution,
    seed: u64,
) -> Result<VertexSet> {
    let c = cover_probabilities(e_a, d_b)?;
    let bands = threshold_bands(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut drawn = &d_b.support()[0].0;
    for (g, p) in d_b.support() {
        acc += p;
        drawn = g;
        if u < acc {
            break;
        }
    }
    let taken = mvc_canonical(&e_a.union(drawn)?);
    let cover = bands.s3.union(taken.intersect(bands.s2));
    if !e_a.is_covered_by(cover) {
        return Err(Error::InvalidSupport(
            "band cover misses an edge; cover probabilities are not distribution-induced".into(),
        ));
    }
    Ok(cover)
}
