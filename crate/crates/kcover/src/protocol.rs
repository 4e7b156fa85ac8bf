//! The k-party one-way cover protocol: parties hold edge slices of a shared
//! graph, each sender extends every candidate cover it received with
//! responses for a geometric ladder of optimum guesses, and the last party
//! completes the best candidate exactly.

use std::collections::HashMap;

use crate::dist::{cover_probabilities, weights_from_probs, GraphDistribution};
use crate::error::{Error, Result};
use crate::game::{sample_strategy, solve_game, MixedStrategy, MvcGameSpec, WINDOW_TOL};
use crate::graph::{Graph, VertexSet};
use crate::solver::{min_weight_vc, mvc_canonical, mvc_size};

/// How strategies are produced: `Oracle` responds to a known completion
/// distribution; `Game` solves the finite commitment game per guess.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolMode {
    Oracle,
    Game,
}

impl std::fmt::Display for ProtocolMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProtocolMode::Oracle => write!(f, "oracle"),
            ProtocolMode::Game => write!(f, "game"),
        }
    }
}

/// Protocol-wide parameters.
///
/// The discount a sender plays with depends on how many parties remain
/// after it: the second-to-last party plays `β = 1` (the receiver solves
/// its residual exactly), and with `j ≥ 2` parties remaining the discount
/// is `2^{1−j} − 5·eps`, which the constructor requires to be positive.
#[derive(Clone, Copy, Debug)]
pub struct ProtocolConfig {
    pub k: usize,
    pub eps: f64,
    pub mode: ProtocolMode,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn new(k: usize, eps: f64, mode: ProtocolMode, seed: u64) -> Result<ProtocolConfig> {
        if k < 1 {
            return Err(Error::ParamOutOfRange("k must be at least 1".into()));
        }
        if !eps.is_finite() || !(eps > 0.0 && eps < 0.2) {
            return Err(Error::ParamOutOfRange(format!(
                "eps must lie in (0, 1/5), got {eps}"
            )));
        }
        let cfg = ProtocolConfig { k, eps, mode, seed };
        for i in 1..k {
            let beta = cfg.beta_for_party(i);
            if beta <= 0.0 {
                return Err(Error::ParamOutOfRange(format!(
                    "discount for party {i} of {k} is {beta}; eps {eps} is too large for this k"
                )));
            }
        }
        Ok(cfg)
    }

    /// The discount β used by sender `i` (1-based, `i < k`).
    pub fn beta_for_party(&self, i: usize) -> f64 {
        beta_for_party(self.k, i, self.eps)
    }
}

/// Discount schedule by remaining parties `j = k − i`: `β = 1` for the last
/// sender, `2^{1−j} − 5·eps` before that.
pub fn beta_for_party(k: usize, i: usize, eps: f64) -> f64 {
    assert!(i >= 1 && i < k, "sender index {i} out of range for k = {k}");
    let remaining = (k - i) as i32;
    if remaining == 1 {
        1.0
    } else {
        2f64.powi(1 - remaining) - 5.0 * eps
    }
}

/// Number of ladder guesses sender `i` makes: enough powers of `1 + eps` to
/// sweep from `τ(G_i')` past `2^{k−i}·τ(G_i')`, plus one rung of margin.
/// The exact-residual catch-all line is on top of these.
pub fn num_guesses(k: usize, i: usize, eps: f64) -> Result<usize> {
    if i < 1 || i >= k {
        return Err(Error::ParamOutOfRange(format!(
            "sender index {i} out of range for k = {k}"
        )));
    }
    if !eps.is_finite() || !(eps > 0.0 && eps < 0.2) {
        return Err(Error::ParamOutOfRange(format!(
            "eps must lie in (0, 1/5), got {eps}"
        )));
    }
    let ladder = ((k - i) as f64 * 2f64.ln() / (1.0 + eps).ln()).ceil() as usize;
    Ok(ladder + 1)
}

/// A graph split into per-party edge slices over a shared vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedInstance {
    n: usize,
    parts: Vec<Graph>,
}

impl PartitionedInstance {
    pub fn new(parts: Vec<Graph>) -> Result<PartitionedInstance> {
        let Some(first) = parts.first() else {
            return Err(Error::ParamOutOfRange(
                "instance needs at least one part".into(),
            ));
        };
        let n = first.n();
        for p in &parts {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    what: "instance parts",
                    left: p.n(),
                    right: n,
                });
            }
        }
        Ok(PartitionedInstance { n, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Graph] {
        &self.parts
    }

    /// Edge slice of party `i` (1-based).
    pub fn part(&self, i: usize) -> &Graph {
        &self.parts[i - 1]
    }

    /// The whole graph: union of every party's slice.
    pub fn base(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for p in &self.parts {
            g = g.union(p).expect("parts share n");
        }
        g
    }
}

/// One round's payload: candidate covers of everything sent so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub covers: Vec<VertexSet>,
}

impl Message {
    /// The starting message: a single empty commitment.
    pub fn initial() -> Message {
        Message { covers: vec![VertexSet::EMPTY] }
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Transmission cost: one n-bit characteristic vector per cover.
    pub fn bit_cost(&self, n: usize) -> u64 {
        self.covers.len() as u64 * n as u64
    }
}

/// Everything a provider may condition a response on.
pub struct StrategyRequest<'a> {
    /// Sender index, 1-based.
    pub party: usize,
    /// The commitment being extended.
    pub committed: VertexSet,
    /// The sender's full edge slice.
    pub part: &'a Graph,
    /// The slice minus the committed vertices.
    pub residual: &'a Graph,
    /// Exact cover number of the residual.
    pub residual_mvc: usize,
    /// The optimum guess `O_l` this response answers.
    pub guess: f64,
    /// Ladder position `l`, 1-based.
    pub guess_index: usize,
    pub beta: f64,
    pub eps: f64,
    /// Sub-seed derived from the root seed and (party, commitment, l).
    pub seed: u64,
}

/// Produces the cover a sender adds on top of a commitment for one guess.
pub trait StrategyProvider {
    fn propose(&mut self, req: &StrategyRequest<'_>) -> Result<VertexSet>;
}

fn derive_seed(root: u64, party: usize, committed: VertexSet, l: usize) -> u64 {
    // splitmix64 over the packed coordinates; stable across runs.
    let mut z = root
        ^ (party as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ committed.bits().wrapping_mul(0xbf58_476d_1ce4_e5b9)
        ^ (l as u64).wrapping_mul(0x94d0_49bb_1331_11eb);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One sender round: every received commitment either passes through (its
/// residual is edgeless) or fans out into one response per ladder guess
/// plus the exact residual cover as a catch-all.
pub fn party_step(
    i: usize,
    g_i: &Graph,
    prev_union: &Graph,
    m_prev: &Message,
    cfg: &ProtocolConfig,
    provider: &mut dyn StrategyProvider,
) -> Result<Message> {
    if i < 1 || i >= cfg.k {
        return Err(Error::ParamOutOfRange(format!(
            "sender index {i} out of range for k = {}",
            cfg.k
        )));
    }
    let b_i = num_guesses(cfg.k, i, cfg.eps)?;
    let beta = cfg.beta_for_party(i);
    let mut covers = Vec::new();
    // Distinct commitments share their fan-out; duplicates re-emit it.
    let mut seen: HashMap<u64, Vec<VertexSet>> = HashMap::new();
    for &s in &m_prev.covers {
        if !prev_union.is_covered_by(s) {
            return Err(Error::InvalidMessage(format!(
                "commitment {s} does not cover everything sent before party {i}"
            )));
        }
        if let Some(ext) = seen.get(&s.bits()) {
            covers.extend_from_slice(ext);
            continue;
        }
        let residual = g_i.residual(s);
        let mut ext = Vec::new();
        if !residual.has_edges() {
            ext.push(s);
        } else {
            let tau = mvc_size(&residual);
            for l in 1..=b_i {
                let guess = (1.0 + cfg.eps).powi(l as i32 - 1) * tau as f64;
                let req = StrategyRequest {
                    party: i,
                    committed: s,
                    part: g_i,
                    residual: &residual,
                    residual_mvc: tau,
                    guess,
                    guess_index: l,
                    beta,
                    eps: cfg.eps,
                    seed: derive_seed(cfg.seed, i, s, l),
                };
                let x = provider.propose(&req)?;
                ext.push(x.union(s));
            }
            ext.push(mvc_canonical(&residual).union(s));
        }
        covers.extend_from_slice(&ext);
        seen.insert(s.bits(), ext);
    }
    Ok(Message { covers })
}

/// The receiver's move: complete every candidate exactly on its own slice
/// and return the smallest result, ties broken lexicographically.
pub fn final_step(g_k: &Graph, prev_union: &Graph, m_prev: &Message) -> Result<VertexSet> {
    if m_prev.is_empty() {
        return Err(Error::InvalidMessage("empty message".into()));
    }
    let mut completed: HashMap<u64, VertexSet> = HashMap::new();
    let mut best: Option<VertexSet> = None;
    for &s in &m_prev.covers {
        if !prev_union.is_covered_by(s) {
            return Err(Error::InvalidMessage(format!(
                "commitment {s} does not cover everything sent to the last party"
            )));
        }
        let candidate = *completed
            .entry(s.bits())
            .or_insert_with(|| mvc_canonical(&g_k.residual(s)).union(s));
        let better = match best {
            None => true,
            Some(b) => (candidate.len(), candidate) < (b.len(), b),
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("message is nonempty"))
}

/// What a full run reports.
#[derive(Clone, Debug)]
pub struct ProtocolReport {
    pub output: VertexSet,
    /// Output covers the whole base graph.
    pub valid: bool,
    pub output_size: usize,
    /// Exact cover number of the base graph.
    pub opt: usize,
    /// `output_size / opt`; 1 when both are zero. Meaningless when
    /// `ratio_defined` is false (edgeless base, nonempty output).
    pub ratio: f64,
    pub ratio_defined: bool,
    /// Bits sent per round: `|M_i| · n` for each sender.
    pub round_bits: Vec<u64>,
    /// Covers per sent message.
    pub message_counts: Vec<usize>,
    /// Ladder guesses `b_i` per sender.
    pub guesses_per_party: Vec<usize>,
}

impl ProtocolReport {
    pub fn total_comm_bits(&self) -> u64 {
        self.round_bits.iter().sum()
    }
}

/// Run the whole chain: senders `1..k−1`, then the exact completion.
pub fn run_protocol(
    inst: &PartitionedInstance,
    cfg: &ProtocolConfig,
    provider: &mut dyn StrategyProvider,
) -> Result<ProtocolReport> {
    if inst.k() != cfg.k {
        return Err(Error::DimensionMismatch {
            what: "instance parts vs configured k",
            left: inst.k(),
            right: cfg.k,
        });
    }
    let mut message = Message::initial();
    let mut prev_union = Graph::empty(inst.n());
    let mut round_bits = Vec::new();
    let mut message_counts = Vec::new();
    let mut guesses_per_party = Vec::new();
    for i in 1..cfg.k {
        message = party_step(i, inst.part(i), &prev_union, &message, cfg, provider)?;
        prev_union = prev_union.union(inst.part(i))?;
        round_bits.push(message.bit_cost(inst.n()));
        message_counts.push(message.len());
        guesses_per_party.push(num_guesses(cfg.k, i, cfg.eps)?);
    }
    let output = final_step(inst.part(cfg.k), &prev_union, &message)?;
    let base = inst.base();
    let opt = mvc_size(&base);
    let valid = base.is_covered_by(output);
    let (ratio, ratio_defined) = if opt > 0 {
        (output.len() as f64 / opt as f64, true)
    } else if output.is_empty() {
        (1.0, true)
    } else {
        (f64::NAN, false)
    };
    Ok(ProtocolReport {
        output,
        valid,
        output_size: output.len(),
        opt,
        ratio,
        ratio_defined,
        round_bits,
        message_counts,
        guesses_per_party,
    })
}

/// A joint distribution over the edge slices of parties `2..k`, holding
/// whole assignments so later parties can condition on what they observe.
#[derive(Clone, Debug)]
pub struct JointAdversary {
    n: usize,
    k: usize,
    /// Each entry: the slices of parties `2..=k` in order, with probability.
    support: Vec<(Vec<Graph>, f64)>,
}

impl JointAdversary {
    pub fn new(n: usize, k: usize, support: Vec<(Vec<Graph>, f64)>) -> Result<JointAdversary> {
        if k < 2 {
            return Err(Error::ParamOutOfRange(
                "adversary distributions need k at least 2".into(),
            ));
        }
        if support.is_empty() {
            return Err(Error::InvalidSupport("empty adversary support".into()));
        }
        let mut total = 0.0;
        for (parts, p) in &support {
            if parts.len() != k - 1 {
                return Err(Error::DimensionMismatch {
                    what: "adversary assignment vs party count",
                    left: parts.len(),
                    right: k - 1,
                });
            }
            for g in parts {
                if g.n() != n {
                    return Err(Error::DimensionMismatch {
                        what: "adversary graph vs instance",
                        left: g.n(),
                        right: n,
                    });
                }
            }
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidSupport(format!(
                    "assignment probability {p} is not a finite nonnegative value"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSupport(format!(
                "assignment probabilities sum to {total}, expected 1"
            )));
        }
        Ok(JointAdversary { n, k, support })
    }

    /// Wrap a distribution over the union of all future edges as a joint
    /// assignment handing everything to the last party.
    pub fn from_union(d: &GraphDistribution, k: usize) -> Result<JointAdversary> {
        let support = d
            .support()
            .iter()
            .map(|(g, p)| {
                let mut parts = vec![Graph::empty(d.n()); k - 1];
                parts[k - 2] = g.clone();
                (parts, *p)
            })
            .collect();
        JointAdversary::new(d.n(), k, support)
    }

    pub fn support(&self) -> &[(Vec<Graph>, f64)] {
        &self.support
    }

    /// The instances this adversary generates, for exact expectations: each
    /// assignment prepended with the fixed first slice.
    pub fn instances(&self, part1: &Graph) -> Result<Vec<(PartitionedInstance, f64)>> {
        if part1.n() != self.n {
            return Err(Error::DimensionMismatch {
                what: "first slice vs adversary",
                left: part1.n(),
                right: self.n,
            });
        }
        self.support
            .iter()
            .map(|(parts, p)| {
                let mut all = Vec::with_capacity(self.k);
                all.push(part1.clone());
                all.extend(parts.iter().cloned());
                Ok((PartitionedInstance::new(all)?, *p))
            })
            .collect()
    }

    /// Distribution of the union of parties `i+1..=k`'s slices, conditioned
    /// on party `i`'s own slice when `i ≥ 2` and that slice occurs in the
    /// support (otherwise the unconditioned marginal is used).
    fn future_union(&self, i: usize, observed: &Graph) -> Result<GraphDistribution> {
        let matches = |parts: &Vec<Graph>| i < 2 || parts[i - 2] == *observed;
        let mut entries: Vec<(&Vec<Graph>, f64)> = self
            .support
            .iter()
            .filter(|(parts, _)| matches(parts))
            .map(|(parts, p)| (parts, *p))
            .collect();
        if entries.is_empty() || entries.iter().map(|(_, p)| p).sum::<f64>() <= 0.0 {
            entries = self.support.iter().map(|(parts, p)| (parts, *p)).collect();
        }
        let total: f64 = entries.iter().map(|(_, p)| p).sum();
        let support: Vec<(Graph, f64)> = entries
            .into_iter()
            .map(|(parts, p)| {
                let mut union = Graph::empty(self.n);
                for g in &parts[(i - 1)..] {
                    union = union.union(g)?;
                }
                Ok((union, p / total))
            })
            .collect::<Result<_>>()?;
        GraphDistribution::new(support)
    }
}

/// Oracle provider: the weighted best response against the (conditioned)
/// future distribution. Ignores the guess, so all ladder rungs of one
/// commitment propose the same cover.
pub struct OracleStrategy {
    adversary: JointAdversary,
    memo: HashMap<(usize, u64, Graph), VertexSet>,
}

impl OracleStrategy {
    pub fn new(adversary: JointAdversary) -> OracleStrategy {
        OracleStrategy { adversary, memo: HashMap::new() }
    }
}

impl StrategyProvider for OracleStrategy {
    fn propose(&mut self, req: &StrategyRequest<'_>) -> Result<VertexSet> {
        // The observed slice is part of the key: one provider may serve
        // runs over different realizations.
        let key = (req.party, req.committed.bits(), req.part.clone());
        if let Some(&x) = self.memo.get(&key) {
            return Ok(x);
        }
        let future = self
            .adversary
            .future_union(req.party, req.part)?
            .restricted(req.committed);
        let c = cover_probabilities(req.residual, &future)?;
        let w = weights_from_probs(&c, req.beta)?;
        let x = min_weight_vc(req.residual, &w)?;
        self.memo.insert(key, x);
        Ok(x)
    }
}

/// Game provider: restrict the candidate family to the commitment's
/// leftover vertices, keep candidates whose joint optimum lands in the
/// guess window, solve the finite game, and sample one cover. An empty
/// window falls back to the exact residual cover.
pub struct GameStrategy {
    family: Vec<Graph>,
    tol: f64,
    max_iters: u64,
    memo: HashMap<(usize, u64, Graph, Vec<usize>), MixedStrategy>,
}

impl GameStrategy {
    pub fn new(family: Vec<Graph>, tol: f64, max_iters: u64) -> GameStrategy {
        GameStrategy { family, tol, max_iters, memo: HashMap::new() }
    }
}

impl StrategyProvider for GameStrategy {
    fn propose(&mut self, req: &StrategyRequest<'_>) -> Result<VertexSet> {
        let mut kept_idx = Vec::new();
        let mut kept = Vec::new();
        for (idx, cand) in self.family.iter().enumerate() {
            if cand.n() != req.residual.n() {
                return Err(Error::DimensionMismatch {
                    what: "candidate vs instance",
                    left: cand.n(),
                    right: req.residual.n(),
                });
            }
            let restricted = cand.residual(req.committed);
            let tau = mvc_size(&restricted.union(req.residual)?) as f64;
            if tau >= req.guess - WINDOW_TOL
                && tau <= (1.0 + req.eps) * req.guess + WINDOW_TOL
            {
                kept_idx.push(idx);
                kept.push(restricted);
            }
        }
        if kept.is_empty() {
            return Ok(mvc_canonical(req.residual));
        }
        let key = (req.party, req.committed.bits(), req.residual.clone(), kept_idx);
        let alice = match self.memo.get(&key) {
            Some(a) => a.clone(),
            None => {
                let spec = MvcGameSpec::new(
                    req.residual.clone(),
                    req.beta,
                    req.eps,
                    req.guess,
                    kept,
                )?;
                let alice = match solve_game(&spec, self.tol, self.max_iters) {
                    Ok(sol) => sol.alice,
                    Err(Error::NoConvergence { partial, .. }) => partial.alice,
                    Err(e) => return Err(e),
                };
                self.memo.insert(key.clone(), alice.clone());
                alice
            }
        };
        Ok(sample_strategy(&alice, req.seed))
    }
}
