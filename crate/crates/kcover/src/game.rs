//! The cover-commitment game: one player commits a vertex cover of a known
//! edge set, an adversary completes the graph from a finite candidate family
//! whose joint optimum is pinned to a guess window, and the adversary's
//! payoff is the committed size plus a discounted exact completion, relative
//! to the joint optimum.
//!
//! Solving is fictitious play plus an exact dense-simplex refinement when
//! the payoff matrix is small. The commit player's strategy space starts
//! from the inclusion-minimal covers (plus the all-vertices fallback) and is
//! grown by weight-based best responses to the adversary's equilibrium
//! mixture until that response is already present, which is what certifies
//! the value bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{cover_probabilities, weights_from_probs, GraphDistribution};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::solver::{enumerate_minimal_vertex_covers, min_weight_vc, mvc_size};

/// Slack for the guess-window membership test, so boundary candidates built
/// from computed guesses are not lost to rounding.
pub const WINDOW_TOL: f64 = 1e-9;

const PROB_TOL: f64 = 1e-9;

/// A fully specified game instance.
#[derive(Clone, Debug)]
pub struct MvcGameSpec {
    e_a: Graph,
    beta: f64,
    eps: f64,
    o: f64,
    candidates: Vec<Graph>,
}

impl MvcGameSpec {
    /// Validates parameter ranges and that every candidate's joint optimum
    /// with `e_a` lies in the window `[o, (1+eps)·o]`.
    pub fn new(
        e_a: Graph,
        beta: f64,
        eps: f64,
        o: f64,
        candidates: Vec<Graph>,
    ) -> Result<MvcGameSpec> {
        if !beta.is_finite() || !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "beta must lie in (0, 1], got {beta}"
            )));
        }
        if !eps.is_finite() || !(eps > 0.0 && eps < 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        if !o.is_finite() || !(o > 0.0 && o < e_a.n() as f64) {
            return Err(Error::ParamOutOfRange(format!(
                "guess o must lie in (0, n), got {o}"
            )));
        }
        if candidates.is_empty() {
            return Err(Error::ParamOutOfRange(
                "candidate family must be nonempty".into(),
            ));
        }
        for cand in &candidates {
            if cand.n() != e_a.n() {
                return Err(Error::DimensionMismatch {
                    what: "candidate vs base graph",
                    left: cand.n(),
                    right: e_a.n(),
                });
            }
            let tau = mvc_size(&cand.union(&e_a)?) as f64;
            if tau < o - WINDOW_TOL || tau > (1.0 + eps) * o + WINDOW_TOL {
                return Err(Error::ParamOutOfRange(format!(
                    "candidate optimum {tau} outside window [{o}, {}]",
                    (1.0 + eps) * o
                )));
            }
        }
        Ok(MvcGameSpec { e_a, beta, eps, o, candidates })
    }

    pub fn e_a(&self) -> &Graph {
        &self.e_a
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn o(&self) -> f64 {
        self.o
    }
    pub fn candidates(&self) -> &[Graph] {
        &self.candidates
    }
}

/// Adversary payoff for a committed cover `x` against completion `e_b`:
/// `(|x| + (2 − beta)·tau(e_b \ x)) / tau(e_b ∪ e_a)`.
pub fn utility(x: VertexSet, e_b: &Graph, spec: &MvcGameSpec) -> Result<f64> {
    if !spec.e_a.is_covered_by(x) {
        return Err(Error::NotACover);
    }
    let denom = mvc_size(&e_b.union(&spec.e_a)?) as f64;
    let resid = mvc_size(&e_b.residual(x)) as f64;
    Ok((x.len() as f64 + (2.0 - spec.beta) * resid) / denom)
}

/// The weight-based response to an adversary mixture: minimum-weight cover
/// of `e_a` under w_v = 1 − (2 − beta)·c_v.
pub fn best_response_cover(
    spec: &MvcGameSpec,
    adversary: &GraphDistribution,
) -> Result<VertexSet> {
    let c = cover_probabilities(&spec.e_a, adversary)?;
    let w = weights_from_probs(&c, spec.beta)?;
    min_weight_vc(&spec.e_a, &w)
}

/// A probability mixture over vertex covers of the game's base edge set.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedStrategy {
    support: Vec<(VertexSet, f64)>,
}

impl MixedStrategy {
    /// Probabilities must be nonnegative and sum to 1 (within 1e-9); every
    /// support element must cover `e_a`.
    pub fn new(support: Vec<(VertexSet, f64)>, e_a: &Graph) -> Result<MixedStrategy> {
        if support.is_empty() {
            return Err(Error::ParamOutOfRange("strategy support is empty".into()));
        }
        let mut total = 0.0;
        for (x, p) in &support {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::ParamOutOfRange(format!(
                    "strategy probability must be nonnegative, got {p}"
                )));
            }
            if !e_a.is_covered_by(*x) {
                return Err(Error::NotACover);
            }
            total += p;
        }
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::ParamOutOfRange(format!(
                "strategy probabilities sum to {total}, expected 1"
            )));
        }
        Ok(MixedStrategy { support })
    }

    pub fn point(x: VertexSet, e_a: &Graph) -> Result<MixedStrategy> {
        MixedStrategy::new(vec![(x, 1.0)], e_a)
    }

    pub fn support(&self) -> &[(VertexSet, f64)] {
        &self.support
    }

    pub fn expected_size(&self) -> f64 {
        self.support.iter().map(|(x, p)| x.len() as f64 * p).sum()
    }
}

/// Deterministic draw from a mixed strategy.
pub fn sample_strategy(m: &MixedStrategy, seed: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (x, p) in &m.support {
        acc += p;
        if u < acc {
            return *x;
        }
    }
    m.support.last().expect("support is nonempty").0
}

/// Result of solving a game.
#[derive(Clone, Debug)]
pub struct GameSolution {
    pub alice: MixedStrategy,
    /// Worst-case (over candidates) expected payoff of `alice`.
    pub value: f64,
    /// Fictitious-play iterations executed.
    pub iterations: u64,
    /// `value` minus the best certified lower bound on the game value.
    pub gap: f64,
}

/// The commit player's starting strategy space: inclusion-minimal covers of
/// `e_a` plus the all-vertices fallback.
pub fn alice_strategy_space(e_a: &Graph) -> Result<Vec<VertexSet>> {
    let mut rows = enumerate_minimal_vertex_covers(e_a)?;
    let full = VertexSet::full(e_a.n());
    if !rows.contains(&full) {
        rows.push(full);
    }
    Ok(rows)
}

/// Payoff matrix rows×candidates for the given cover rows.
pub fn build_payoff_matrix(spec: &MvcGameSpec, rows: &[VertexSet]) -> Result<Vec<Vec<f64>>> {
    let denoms: Vec<f64> = spec
        .candidates
        .iter()
        .map(|c| Ok(mvc_size(&c.union(&spec.e_a)?) as f64))
        .collect::<Result<_>>()?;
    rows.iter()
        .map(|&x| {
            if !spec.e_a.is_covered_by(x) {
                return Err(Error::NotACover);
            }
            Ok(spec
                .candidates
                .iter()
                .zip(&denoms)
                .map(|(c, d)| {
                    let resid = mvc_size(&c.residual(x)) as f64;
                    (x.len() as f64 + (2.0 - spec.beta) * resid) / d
                })
                .collect())
        })
        .collect()
}

/// Outcome of a fictitious-play run on a payoff matrix where rows minimize
/// and columns maximize.
#[derive(Clone, Debug)]
pub struct FictitiousPlayOutcome {
    /// Row mixture whose worst column payoff equals `value_upper`.
    pub row_mix: Vec<f64>,
    /// Column mixture whose best row payoff equals `value_lower`.
    pub col_mix: Vec<f64>,
    /// Upper bound on the game value, certified by `row_mix`.
    pub value_upper: f64,
    /// Lower bound on the game value, certified by `col_mix`.
    pub value_lower: f64,
    pub iterations: u64,
}

impl FictitiousPlayOutcome {
    pub fn gap(&self) -> f64 {
        self.value_upper - self.value_lower
    }
}

/// Alternating fictitious play with uniform averaging and exact best
/// responses; stops when the certified bound gap reaches `tol` or after
/// `max_iters` rounds.
///
/// Each side's empirical mixture certifies a bound at every step, so the
/// returned bounds are the best seen anywhere along the trajectory, each
/// paired with the mixture that achieved it.
pub fn fictitious_play(matrix: &[Vec<f64>], tol: f64, max_iters: u64) -> FictitiousPlayOutcome {
    let m = matrix.len();
    let n = matrix[0].len();
    let mut row_counts = vec![0u64; m];
    let mut col_counts = vec![0u64; n];
    // acc_row[i] = payoff of row i against all column plays so far.
    let mut acc_row = vec![0.0f64; m];
    // acc_col[j] = payoff of column j against all row plays so far.
    let mut acc_col = vec![0.0f64; n];
    let mut iters = 0u64;
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut upper_counts = row_counts.clone();
    let mut lower_counts = col_counts.clone();
    let mut upper_t = 1u64;
    let mut lower_t = 1u64;
    while iters < max_iters {
        iters += 1;
        let i = argmin(&acc_row);
        row_counts[i] += 1;
        for (j, a) in acc_col.iter_mut().enumerate() {
            *a += matrix[i][j];
        }
        let j = argmax(&acc_col);
        col_counts[j] += 1;
        for (i2, a) in acc_row.iter_mut().enumerate() {
            *a += matrix[i2][j];
        }
        let t = iters as f64;
        let u = acc_col[argmax(&acc_col)] / t;
        if u < upper {
            upper = u;
            upper_counts.copy_from_slice(&row_counts);
            upper_t = iters;
        }
        let l = acc_row[argmin(&acc_row)] / t;
        if l > lower {
            lower = l;
            lower_counts.copy_from_slice(&col_counts);
            lower_t = iters;
        }
        if upper - lower <= tol {
            break;
        }
    }
    FictitiousPlayOutcome {
        row_mix: upper_counts.iter().map(|&c| c as f64 / upper_t as f64).collect(),
        col_mix: lower_counts.iter().map(|&c| c as f64 / lower_t as f64).collect(),
        value_upper: upper,
        value_lower: lower,
        iterations: iters,
    }
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Exact equilibrium of a matrix game (rows minimize, columns maximize).
#[derive(Clone, Debug)]
pub struct MatrixGameSolution {
    pub row_mix: Vec<f64>,
    pub col_mix: Vec<f64>,
    pub value: f64,
}

/// Largest matrix the exact refinement is attempted on.
pub const LP_DIM_CAP: usize = 200;

/// Solve a matrix game exactly with a dense simplex tableau.
///
/// The matrix is shifted entrywise positive and the row player's packing
/// program `max Σu, M'ᵀu ≤ 1, u ≥ 0` (one constraint per column) is solved
/// from the slack basis with Bland's rule; then `1/Σu` is the shifted value,
/// the scaled `u` is the row mixture, and the column mixture is read off the
/// slack reduced costs. The shift cancels in the returned value.
pub fn solve_matrix_game_lp(matrix: &[Vec<f64>]) -> MatrixGameSolution {
    let m = matrix.len(); // simplex variables: one per game row
    let n = matrix[0].len(); // simplex constraints: one per game column
    let min_entry = matrix
        .iter()
        .flat_map(|r| r.iter())
        .fold(f64::INFINITY, |a, &b| a.min(b));
    let shift = 1.0 - min_entry;

    // Tableau: n constraint rows, columns = m vars + n slacks + rhs.
    let cols = m + n + 1;
    let mut tab = vec![vec![0.0f64; cols]; n + 1];
    for j in 0..n {
        for i in 0..m {
            tab[j][i] = matrix[i][j] + shift;
        }
        tab[j][m + j] = 1.0;
        tab[j][cols - 1] = 1.0;
    }
    for i in 0..m {
        tab[n][i] = -1.0; // maximize Σ u_i
    }
    let mut basis: Vec<usize> = (m..m + n).collect();

    const PIVOT_TOL: f64 = 1e-12;
    loop {
        // Bland: entering = lowest-index improving column.
        let Some(enter) = (0..m + n).find(|&c| tab[n][c] < -PIVOT_TOL) else {
            break;
        };
        // Ratio test; Bland tie-break on the leaving basis variable.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..n {
            if tab[r][enter] > PIVOT_TOL {
                let ratio = tab[r][cols - 1] / tab[r][enter];
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best_ratio - PIVOT_TOL
                            || (ratio < best_ratio + PIVOT_TOL && basis[r] < basis[l])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(r);
                }
            }
        }
        let leave = leave.expect("shifted-positive matrix keeps the program bounded");
        // Pivot.
        let piv = tab[leave][enter];
        for x in tab[leave].iter_mut() {
            *x /= piv;
        }
        for r in 0..=n {
            if r != leave {
                let factor = tab[r][enter];
                if factor != 0.0 {
                    for c in 0..cols {
                        tab[r][c] -= factor * tab[leave][c];
                    }
                }
            }
        }
        basis[leave] = enter;
    }

    let objective = tab[n][cols - 1]; // Σ u* at optimum
    let inv_value = objective.max(f64::MIN_POSITIVE);
    let shifted_value = 1.0 / inv_value;

    let mut u = vec![0.0f64; m];
    for (r, &b) in basis.iter().enumerate() {
        if b < m {
            u[b] = tab[r][cols - 1].max(0.0);
        }
    }
    let mut t = vec![0.0f64; n];
    for (j, tj) in t.iter_mut().enumerate() {
        *tj = tab[n][m + j].max(0.0);
    }
    let row_mix: Vec<f64> = normalize(&u);
    let col_mix: Vec<f64> = normalize(&t);
    MatrixGameSolution { row_mix, col_mix, value: shifted_value - shift }
}

fn normalize(xs: &[f64]) -> Vec<f64> {
    let total: f64 = xs.iter().sum();
    if total <= 0.0 {
        let n = xs.len() as f64;
        return vec![1.0 / n; xs.len()];
    }
    xs.iter().map(|&x| x / total).collect()
}

fn worst_column_payoff(matrix: &[Vec<f64>], row_mix: &[f64]) -> f64 {
    let n = matrix[0].len();
    (0..n)
        .map(|j| {
            matrix
                .iter()
                .zip(row_mix)
                .map(|(row, &p)| p * row[j])
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn best_row_payoff(matrix: &[Vec<f64>], col_mix: &[f64]) -> f64 {
    matrix
        .iter()
        .map(|row| row.iter().zip(col_mix).map(|(&a, &q)| a * q).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

const MAX_GENERATION_ROUNDS: usize = 100;

/// Solve the cover-commitment game.
///
/// Errors with `CapExceeded` if the strategy space cannot be enumerated and
/// `NoConvergence` (carrying the partial solution) if the certified gap
/// stays above `tol`.
pub fn solve_game(spec: &MvcGameSpec, tol: f64, max_iters: u64) -> Result<GameSolution> {
    let mut rows = alice_strategy_space(&spec.e_a)?;
    let mut matrix = build_payoff_matrix(spec, &rows)?;
    let n_cols = spec.candidates.len();

    // Grow the row space with weight-based responses to the adversary's
    // current equilibrium mixture until the response is already present.
    let mut fp_iterations = 0u64;
    for _ in 0..MAX_GENERATION_ROUNDS {
        let col_mix = if rows.len() <= LP_DIM_CAP && n_cols <= LP_DIM_CAP {
            solve_matrix_game_lp(&matrix).col_mix
        } else {
            let fp = fictitious_play(&matrix, tol, max_iters);
            fp_iterations += fp.iterations;
            fp.col_mix
        };
        let adversary = mixture_distribution(&spec.candidates, &col_mix)?;
        let response = best_response_cover(spec, &adversary)?;
        if rows.contains(&response) {
            break;
        }
        matrix.push(build_payoff_matrix(spec, std::slice::from_ref(&response))?.remove(0));
        rows.push(response);
    }

    // Fictitious play on the final matrix, then the exact refinement.
    let fp = fictitious_play(&matrix, tol, max_iters);
    fp_iterations += fp.iterations;
    let (row_mix, mut lower) = if rows.len() <= LP_DIM_CAP && n_cols <= LP_DIM_CAP {
        let lp = solve_matrix_game_lp(&matrix);
        let lp_lower = best_row_payoff(&matrix, &lp.col_mix);
        (lp.row_mix, lp_lower.max(fp.value_lower))
    } else {
        (fp.row_mix.clone(), fp.value_lower)
    };

    let value = worst_column_payoff(&matrix, &row_mix);
    if lower > value {
        lower = value;
    }
    let gap = value - lower;

    let support: Vec<(VertexSet, f64)> = rows
        .iter()
        .zip(&row_mix)
        .filter(|(_, &p)| p > 1e-12)
        .map(|(&x, &p)| (x, p))
        .collect();
    let total: f64 = support.iter().map(|(_, p)| p).sum();
    let support = support
        .into_iter()
        .map(|(x, p)| (x, p / total))
        .collect::<Vec<_>>();
    let alice = MixedStrategy::new(support, &spec.e_a)?;
    let solution = GameSolution { alice, value, iterations: fp_iterations, gap };
    if gap > tol {
        return Err(Error::NoConvergence {
            gap,
            iterations: fp_iterations,
            partial: Box::new(solution),
        });
    }
    Ok(solution)
}

fn mixture_distribution(candidates: &[Graph], col_mix: &[f64]) -> Result<GraphDistribution> {
    let clamped: Vec<f64> = col_mix.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let support: Vec<(Graph, f64)> = if total <= 0.0 {
        let u = 1.0 / candidates.len() as f64;
        candidates.iter().map(|g| (g.clone(), u)).collect()
    } else {
        candidates
            .iter()
            .zip(&clamped)
            .map(|(g, &p)| (g.clone(), p / total))
            .collect()
    };
    GraphDistribution::new(support)
}

/// The pure-response payoff bound `(2 − beta/2)·(1 + eps)` that solved games
/// are checked against.
pub fn value_bound(spec: &MvcGameSpec) -> f64 {
    (2.0 - spec.beta / 2.0) * (1.0 + spec.eps)
}
