//! Executing protocol runs into CSV rows.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use kcover::{
    run_protocol, Graph, GameStrategy, JointAdversary, OracleStrategy, PartitionedInstance,
    ProtocolConfig, ProtocolMode, StrategyProvider, StrategyRequest, VertexSet,
};

use crate::report::{Num, Row};

/// Placeholder provider for one-party runs, which have no senders.
pub struct NoSenders;

impl StrategyProvider for NoSenders {
    fn propose(&mut self, req: &StrategyRequest<'_>) -> kcover::Result<VertexSet> {
        unreachable!("no sender should ask for a response (party {})", req.party)
    }
}

/// Tolerance handed to the embedded game solver during game-mode runs.
pub const GAME_TOL: f64 = 1e-6;
/// Iteration budget for the embedded game solver.
pub const GAME_MAX_ITERS: u64 = 500_000;

fn base_row(id: &str, cfg: &ProtocolConfig) -> Row {
    Row {
        instance_id: id.to_string(),
        k: cfg.k,
        epsilon: cfg.eps,
        mode: cfg.mode.to_string(),
        seed: cfg.seed,
        n: 0,
        opt: Num::Int(0),
        output_size: Num::Int(0),
        ratio: f64::NAN,
        total_comm_bits: Num::Int(0),
        round_bits: Vec::new(),
        runtime_ms: 0,
        valid: false,
        status: "ok".to_string(),
    }
}

/// One run on one realized instance; counts are exact integers.
pub fn realized_run(
    inst: &PartitionedInstance,
    cfg: &ProtocolConfig,
    provider: &mut dyn StrategyProvider,
    id: &str,
) -> Result<Row> {
    let start = Instant::now();
    let report = run_protocol(inst, cfg, provider)?;
    let mut row = base_row(id, cfg);
    row.n = inst.n();
    row.opt = Num::Int(report.opt as u64);
    row.output_size = Num::Int(report.output_size as u64);
    row.ratio = report.ratio;
    row.total_comm_bits = Num::Int(report.total_comm_bits());
    row.round_bits = report.round_bits.iter().map(|&b| Num::Int(b)).collect();
    row.valid = report.valid;
    row.runtime_ms = start.elapsed().as_millis();
    Ok(row)
}

/// Exact expectations over an adversary's support in oracle mode: the run
/// is executed once per support element and every column is averaged, so
/// the ratio column is a true ratio of expectations.
pub fn expectation_run(
    part1: &Graph,
    adv: &JointAdversary,
    cfg: &ProtocolConfig,
    id: &str,
) -> Result<Row> {
    if cfg.mode != ProtocolMode::Oracle {
        bail!("expectation rows are only defined for oracle mode");
    }
    let start = Instant::now();
    let mut provider = OracleStrategy::new(adv.clone());
    let mut e_out = 0.0;
    let mut e_opt = 0.0;
    let mut e_bits = 0.0;
    let mut e_round = vec![0.0; cfg.k.saturating_sub(1)];
    let mut valid = true;
    for (inst, p) in adv.instances(part1)? {
        let report = run_protocol(&inst, cfg, &mut provider)?;
        valid &= report.valid;
        e_out += p * report.output_size as f64;
        e_opt += p * report.opt as f64;
        e_bits += p * report.total_comm_bits() as f64;
        for (acc, &bits) in e_round.iter_mut().zip(&report.round_bits) {
            *acc += p * bits as f64;
        }
    }
    let ratio = if e_opt > 1e-12 {
        e_out / e_opt
    } else if e_out <= 1e-12 {
        1.0
    } else {
        f64::NAN
    };
    let mut row = base_row(id, cfg);
    row.n = part1.n();
    row.opt = Num::Real(e_opt);
    row.output_size = Num::Real(e_out);
    row.ratio = ratio;
    row.total_comm_bits = Num::Real(e_bits);
    row.round_bits = e_round.into_iter().map(Num::Real).collect();
    row.valid = valid;
    row.runtime_ms = start.elapsed().as_millis();
    Ok(row)
}

/// The adversary that assigns exactly the realized future slices.
pub fn clairvoyant_adversary(inst: &PartitionedInstance) -> Result<JointAdversary> {
    let parts = inst.parts()[1..].to_vec();
    JointAdversary::new(inst.n(), inst.k(), vec![(parts, 1.0)]).context("point-mass adversary")
}

/// Read a candidate family for game mode out of a distribution file; the
/// weights only order the file, the family is its support.
pub fn family_from_distribution(d: &kcover::GraphDistribution) -> Vec<Graph> {
    d.support().iter().map(|(g, _)| g.clone()).collect()
}

/// Build the provider a realized run needs and execute it.
pub fn realized_with_mode(
    inst: &PartitionedInstance,
    cfg: &ProtocolConfig,
    adversary: Option<JointAdversary>,
    family: Option<Vec<Graph>>,
    id: &str,
) -> Result<Row> {
    if cfg.k == 1 {
        return realized_run(inst, cfg, &mut NoSenders, id);
    }
    match cfg.mode {
        ProtocolMode::Oracle => {
            let adv = match adversary {
                Some(a) => a,
                None => clairvoyant_adversary(inst)?,
            };
            realized_run(inst, cfg, &mut OracleStrategy::new(adv), id)
        }
        ProtocolMode::Game => {
            let family =
                family.context("game mode needs a candidate family (--candidates)")?;
            let mut provider = GameStrategy::new(family, GAME_TOL, GAME_MAX_ITERS);
            realized_run(inst, cfg, &mut provider, id)
        }
    }
}
