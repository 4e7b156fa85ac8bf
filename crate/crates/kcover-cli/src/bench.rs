//! Experiment plans: structured text, one run per line.
//!
//! ```text
//! # lines are `key=value` tokens; `run` as a leading token is optional
//! run instance=layered.kparts k=3 eps=0.05 mode=oracle reps=1
//! instance=two.kparts k=2 eps=0.1 mode=oracle dist=futures.dist reps=3
//! instance=two.kparts k=2 eps=0.1 mode=game candidates=futures.dist
//! ```
//!
//! Relative paths resolve against the plan file's directory. An oracle run
//! with a `dist` reports exact expectations over that distribution (one
//! row per rep, identical by construction); without one it runs on the
//! realized instance against the point-mass adversary. Rows are emitted in
//! plan order and a failed run becomes a flagged row instead of aborting.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kcover::formats::{parse_distribution, parse_instance};
use kcover::{JointAdversary, ProtocolConfig, ProtocolMode};

use crate::report::{bench_header, derive_seed, fmt_real, Row};
use crate::runs::{expectation_run, family_from_distribution, realized_with_mode};

#[derive(Clone, Debug)]
pub struct PlanRun {
    pub line: usize,
    pub instance: PathBuf,
    pub k: usize,
    pub eps: f64,
    pub mode: ProtocolMode,
    pub dist: Option<PathBuf>,
    pub candidates: Option<PathBuf>,
    pub reps: u64,
}

fn parse_mode(s: &str) -> Result<ProtocolMode> {
    match s {
        "oracle" => Ok(ProtocolMode::Oracle),
        "game" => Ok(ProtocolMode::Game),
        other => bail!("unknown mode {other:?} (expected oracle or game)"),
    }
}

pub fn parse_plan(text: &str, base: &Path) -> Result<Vec<PlanRun>> {
    let mut runs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut instance = None;
        let mut k = None;
        let mut eps = None;
        let mut mode = None;
        let mut dist = None;
        let mut candidates = None;
        let mut reps = 1u64;
        for token in trimmed.split_whitespace() {
            if token == "run" {
                continue;
            }
            let Some((key, value)) = token.split_once('=') else {
                bail!("plan line {line}: token {token:?} is not key=value");
            };
            match key {
                "instance" => instance = Some(base.join(value)),
                "k" => k = Some(value.parse().with_context(|| format!("plan line {line}: k"))?),
                "eps" | "epsilon" => {
                    eps = Some(value.parse().with_context(|| format!("plan line {line}: eps"))?)
                }
                "mode" => mode = Some(parse_mode(value).with_context(|| format!("plan line {line}"))?),
                "dist" => dist = Some(base.join(value)),
                "candidates" => candidates = Some(base.join(value)),
                "reps" => {
                    reps = value.parse().with_context(|| format!("plan line {line}: reps"))?
                }
                other => bail!("plan line {line}: unknown key {other:?}"),
            }
        }
        let run = PlanRun {
            line,
            instance: instance.with_context(|| format!("plan line {line}: missing instance="))?,
            k: k.with_context(|| format!("plan line {line}: missing k="))?,
            eps: eps.with_context(|| format!("plan line {line}: missing eps="))?,
            mode: mode.with_context(|| format!("plan line {line}: missing mode="))?,
            dist,
            candidates,
            reps,
        };
        if run.reps < 1 {
            bail!("plan line {line}: reps must be at least 1");
        }
        runs.push(run);
    }
    // Every referenced file must exist before anything runs.
    for run in &runs {
        for path in [Some(&run.instance), run.dist.as_ref(), run.candidates.as_ref()]
            .into_iter()
            .flatten()
        {
            if !path.is_file() {
                bail!("plan line {}: missing file {}", run.line, path.display());
            }
        }
    }
    Ok(runs)
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn execute(run: &PlanRun, seed: u64) -> Result<Row> {
    let id = instance_id(&run.instance);
    let text = fs::read_to_string(&run.instance)
        .with_context(|| format!("reading {}", run.instance.display()))?;
    let inst = parse_instance(&text)?;
    if inst.k() != run.k {
        bail!("instance has {} parts, plan says k={}", inst.k(), run.k);
    }
    let cfg = ProtocolConfig::new(run.k, run.eps, run.mode, seed)?;
    let dist = run
        .dist
        .as_ref()
        .map(|p| -> Result<_> {
            let d = parse_distribution(
                &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            )?;
            Ok(d)
        })
        .transpose()?;
    let family = run
        .candidates
        .as_ref()
        .map(|p| -> Result<_> {
            let d = parse_distribution(
                &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            )?;
            Ok(family_from_distribution(&d))
        })
        .transpose()?;
    match (run.mode, dist) {
        (ProtocolMode::Oracle, Some(d)) => {
            let adv = JointAdversary::from_union(&d, run.k)?;
            expectation_run(inst.part(1), &adv, &cfg, &id)
        }
        (ProtocolMode::Oracle, None) => realized_with_mode(&inst, &cfg, None, None, &id),
        (ProtocolMode::Game, _) => realized_with_mode(&inst, &cfg, None, family, &id),
    }
}

#[derive(Clone, Copy)]
struct GroupStats {
    runs: u64,
    failed: u64,
    ratio_sum: f64,
    ratio_count: u64,
    max_ratio: f64,
    bits: f64,
}

/// Run the plan and render the full CSV: one row per rep in plan order,
/// then a per-(k, eps) summary block with the closed-form guarantee
/// `2 − 2^{1−k} + 5·eps` alongside the measured ratios.
pub fn run_plan(runs: &[PlanRun], root_seed: u64) -> String {
    let mut out = String::new();
    out.push_str(&bench_header());
    out.push('\n');
    if runs.is_empty() {
        return out;
    }
    let mut groups: Vec<((usize, u64), GroupStats)> = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        for rep in 0..run.reps {
            let seed = derive_seed(root_seed, i as u64, rep);
            let row = execute(run, seed).unwrap_or_else(|e| {
                Row::failed(
                    &instance_id(&run.instance),
                    run.k,
                    run.eps,
                    match run.mode {
                        ProtocolMode::Oracle => "oracle",
                        ProtocolMode::Game => "game",
                    },
                    seed,
                    &format!("{e:#}"),
                )
            });
            let key = (run.k, run.eps.to_bits());
            let stats = match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, s)) => s,
                None => {
                    groups.push((
                        key,
                        GroupStats {
                            runs: 0,
                            failed: 0,
                            ratio_sum: 0.0,
                            ratio_count: 0,
                            max_ratio: f64::NEG_INFINITY,
                            bits: 0.0,
                        },
                    ));
                    &mut groups.last_mut().expect("just pushed").1
                }
            };
            stats.runs += 1;
            if row.status != "ok" {
                stats.failed += 1;
            }
            if row.ratio.is_finite() {
                stats.ratio_sum += row.ratio;
                stats.ratio_count += 1;
                stats.max_ratio = stats.max_ratio.max(row.ratio);
            }
            stats.bits += match row.total_comm_bits {
                crate::report::Num::Int(v) => v as f64,
                crate::report::Num::Real(v) => v,
            };
            out.push_str(&row.csv(true));
            out.push('\n');
        }
    }
    out.push_str("# summary\n");
    out.push_str("k,epsilon,runs,failed,mean_ratio,max_ratio,total_comm_bits,bound\n");
    for ((k, eps_bits), s) in groups {
        let eps = f64::from_bits(eps_bits);
        let mean = if s.ratio_count > 0 {
            s.ratio_sum / s.ratio_count as f64
        } else {
            f64::NAN
        };
        let max = if s.ratio_count > 0 { s.max_ratio } else { f64::NAN };
        let bound = 2.0 - 2f64.powi(1 - k as i32) + 5.0 * eps;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            k,
            fmt_real(eps),
            s.runs,
            s.failed,
            fmt_real(mean),
            fmt_real(max),
            fmt_real(s.bits),
            fmt_real(bound),
        ));
    }
    out
}
