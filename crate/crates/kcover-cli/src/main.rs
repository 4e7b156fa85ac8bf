//! `kcover` — exact solving, protocol runs, game solving, lemma suites,
//! instance generation, and benchmark sweeps over the cover protocol.

mod bench;
mod lemmas;
mod report;
mod runs;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kcover::formats::{parse_distribution, parse_game_spec, parse_graph, parse_instance, write_instance};
use kcover::{
    find_rs_graph, layered_instance, mvc_canonical, random_partitioned_instance,
    rs_lower_bound_instance, solve_game, value_bound, Error, JointAdversary, ProtocolConfig,
    ProtocolMode, RsInstanceFamily, VertexSet,
};

use report::{fmt_real, RUN_HEADER};

#[derive(Parser)]
#[command(name = "kcover", version, about = "Simulator for the k-party one-way cover protocol")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Oracle,
    Game,
}

impl From<ModeArg> for ProtocolMode {
    fn from(m: ModeArg) -> ProtocolMode {
        match m {
            ModeArg::Oracle => ProtocolMode::Oracle,
            ModeArg::Game => ProtocolMode::Game,
        }
    }
}

#[derive(Args)]
struct RunProtocolArgs {
    /// Partitioned instance file (kparts format).
    #[arg(long)]
    instance: PathBuf,
    /// Number of parties; must match the instance.
    #[arg(long)]
    k: usize,
    /// Ladder step; also sets the per-party discounts.
    #[arg(long)]
    epsilon: f64,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Oracle mode: belief distribution over the future union (dist format).
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Game mode: candidate family file (dist format; weights ignored).
    #[arg(long)]
    candidates: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (header plus one row).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Three parties: two matchings hidden behind a clique.
    Layered,
    /// Two parties: sampled induced matchings plus fresh padding.
    Rs,
    /// Random edges split uniformly over the parties.
    Random,
}

#[derive(Args)]
struct GenInstanceArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Output kparts file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// layered: vertices per block.
    #[arg(long)]
    m: Option<usize>,
    /// rs: vertices per bipartition side.
    #[arg(long)]
    n_side: Option<usize>,
    /// rs: number of induced matchings.
    #[arg(long)]
    matchings: Option<usize>,
    /// rs: edges per matching.
    #[arg(long)]
    match_size: Option<usize>,
    /// rs: fraction of each matching sampled into party 1.
    #[arg(long, default_value_t = 0.5)]
    eps2: f64,
    /// random: vertex count.
    #[arg(long)]
    n: Option<usize>,
    /// random: party count.
    #[arg(long)]
    k: Option<usize>,
    /// random: edge probability.
    #[arg(long, default_value_t = 0.3)]
    edge_prob: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Exactly solve one graph file and print the canonical minimum cover.
    Solve {
        #[arg(long)]
        graph: PathBuf,
    },
    /// One protocol run; writes a CSV row and prints a summary line.
    RunProtocol(RunProtocolArgs),
    /// Solve a finite cover game from a spec file.
    GameSolve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 2_000_000)]
        max_iters: u64,
    },
    /// Randomized suites for the weight-bound and middle-region lemmas.
    VerifyLemmas {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named instance family to a kparts file.
    GenInstance(GenInstanceArgs),
    /// Run an experiment plan and emit CSV rows plus a summary block.
    Bench {
        /// Plan file: one run per line (see the bench module docs).
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn vertex_list(s: VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_solve(graph: &Path) -> Result<ExitCode> {
    let g = parse_graph(&read(graph)?)?;
    let cover = mvc_canonical(&g);
    println!("n {}", g.n());
    println!("edges {}", g.edge_count());
    println!("cover_size {}", cover.len());
    println!("cover {}", vertex_list(cover));
    Ok(ExitCode::SUCCESS)
}

fn cmd_run_protocol(args: &RunProtocolArgs) -> Result<ExitCode> {
    let inst = parse_instance(&read(&args.instance)?)?;
    if inst.k() != args.k {
        bail!("instance has {} parts, --k says {}", inst.k(), args.k);
    }
    let cfg = ProtocolConfig::new(args.k, args.epsilon, ProtocolMode::from(args.mode), args.seed)?;
    let adversary = args
        .dist
        .as_ref()
        .map(|p| -> Result<_> {
            let d = parse_distribution(&read(p)?)?;
            Ok(JointAdversary::from_union(&d, args.k)?)
        })
        .transpose()?;
    let family = args
        .candidates
        .as_ref()
        .map(|p| -> Result<_> { Ok(runs::family_from_distribution(&parse_distribution(&read(p)?)?)) })
        .transpose()?;
    let row = runs::realized_with_mode(&inst, &cfg, adversary, family, &instance_id(&args.instance))?;
    write(&args.out, &format!("{RUN_HEADER}\n{}\n", row.csv(false)))?;
    println!(
        "{}: output {} vs opt {} (ratio {}), {} bits over {} rounds, valid {}",
        row.instance_id,
        row.output_size,
        row.opt,
        fmt_real(row.ratio),
        row.total_comm_bits,
        row.round_bits.len(),
        row.valid
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_game_solve(spec_path: &Path, tol: f64, max_iters: u64) -> Result<ExitCode> {
    let spec = parse_game_spec(&read(spec_path)?)?;
    let (solution, converged) = match solve_game(&spec, tol, max_iters) {
        Ok(sol) => (sol, true),
        Err(Error::NoConvergence { partial, .. }) => (*partial, false),
        Err(e) => return Err(e.into()),
    };
    println!("value {}", fmt_real(solution.value));
    println!("gap {}", fmt_real(solution.gap));
    println!("iterations {}", solution.iterations);
    println!("value_cap {}", fmt_real(value_bound(&spec)));
    println!("strategy:");
    for &(x, p) in solution.alice.support() {
        println!("  p {} cover {}", fmt_real(p), vertex_list(x));
    }
    if !converged {
        eprintln!("did not reach tol {tol} within {max_iters} iterations");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_lemmas(trials: u64, seed: u64, out: Option<&Path>) -> Result<ExitCode> {
    if trials < 1 {
        bail!("--trials must be at least 1");
    }
    let (csv, all_hold) = lemmas::verify(trials, seed);
    match out {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if all_hold {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("at least one lemma check failed");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_gen_instance(args: &GenInstanceArgs) -> Result<ExitCode> {
    let inst = match args.family {
        Family::Layered => {
            let m = args.m.context("--family layered needs --m")?;
            if m < 1 || 4 * m > kcover::MAX_VERTICES {
                bail!("--m must lie in 1..={}", kcover::MAX_VERTICES / 4);
            }
            let inst = layered_instance(m);
            println!("layered m={m}: n {}, k 3, optimum {}", inst.n(), 2 * m);
            inst
        }
        Family::Rs => {
            let n_side = args.n_side.context("--family rs needs --n-side")?;
            let k_m = args.matchings.context("--family rs needs --matchings")?;
            let match_size = args.match_size.context("--family rs needs --match-size")?;
            let rs = find_rs_graph(n_side, k_m, match_size, args.seed)?;
            let family = RsInstanceFamily::new(rs, args.eps2)?;
            let draw = rs_lower_bound_instance(&family, args.seed)?;
            println!(
                "rs n_side={n_side} matchings={k_m} match_size={match_size}: n {}, distinguished {}, sampled edges {}, witness {}",
                draw.instance.n(),
                draw.r,
                draw.e1_size,
                draw.witness.len()
            );
            draw.instance
        }
        Family::Random => {
            let n = args.n.context("--family random needs --n")?;
            let k = args.k.context("--family random needs --k")?;
            let inst = random_partitioned_instance(n, args.edge_prob, k, args.seed)?;
            println!(
                "random n={n} k={k} p={}: edges {}",
                args.edge_prob,
                inst.base().edge_count()
            );
            inst
        }
    };
    write(&args.out, &write_instance(&inst))?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(plan_path: &Path, seed: u64, out: &Path) -> Result<ExitCode> {
    let base = plan_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let runs = bench::parse_plan(&read(plan_path)?, &base)?;
    let csv = bench::run_plan(&runs, seed);
    write(out, &csv)?;
    println!("wrote {} ({} runs)", out.display(), runs.iter().map(|r| r.reps).sum::<u64>());
    Ok(ExitCode::SUCCESS)
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Solve { graph } => cmd_solve(graph),
        Command::RunProtocol(args) => cmd_run_protocol(args),
        Command::GameSolve { spec, tol, max_iters } => cmd_game_solve(spec, *tol, *max_iters),
        Command::VerifyLemmas { trials, seed, out } => {
            cmd_verify_lemmas(*trials, *seed, out.as_deref())
        }
        Command::GenInstance(args) => cmd_gen_instance(args),
        Command::Bench { plan, seed, out } => cmd_bench(plan, *seed, out),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
