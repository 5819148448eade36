use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bifurcation::generators::{Family, FamilySpec, TargetStrategy};
use bifurcation::harness::{
    fit_scaling, read_records, run_experiment, sweep, write_records, Algo, Metric, SweepGrid,
};
use bifurcation::lowerbound::{
    adaptive_fork_adversary, minimax_price_with, play_game, GameStrategy, QueryRule,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Search implicit (n,t)-trees with a comparison oracle and run the
/// lower-bound experiments.
#[derive(Parser)]
#[command(name = "bifurcate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one instance and print its record as CSV.
    Search(SearchArgs),
    /// Run a grid of experiments and append the records to a CSV file.
    Sweep(SweepArgs),
    /// Play the leaf-query game against the adversary and print the transcript.
    Game(GameArgs),
    /// Print exact minimax prices of the leaf-query game.
    Minimax(MinimaxArgs),
    /// Run a player against the adaptive fork adversary.
    Adversary(AdversaryArgs),
    /// Fit power laws in n and t to a sweep CSV.
    Fit(FitArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, default_value = "random")]
    family: Family,
    /// Depth bound. With `--family complete_path` and `--h/--delta`, defaults to h·delta.
    #[arg(long)]
    n: Option<u32>,
    /// Fork count. For complete_path, `t = h²`.
    #[arg(long)]
    t: Option<u32>,
    /// Height of the complete tree in the complete_path family.
    #[arg(long)]
    h: Option<u32>,
    /// Edge subdivision length in the complete_path family.
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// random_node, random_leaf, adversarial_deep or fixed:K.
    #[arg(long, default_value = "random_node")]
    target: TargetStrategy,
}

impl InstanceArgs {
    fn resolve(&self) -> Result<(u32, u32)> {
        match (self.h, self.delta) {
            (None, None) => {}
            (Some(h), Some(delta)) => {
                if self.family != Family::CompletePath {
                    bail!("--h/--delta only apply to --family complete_path");
                }
                let n = h.checked_mul(delta).context("h·delta overflows")?;
                let t = h.checked_mul(h).context("h² overflows")?;
                if self.n.is_some_and(|x| x != n) || self.t.is_some_and(|x| x != t) {
                    bail!("--n/--t disagree with --h {h} --delta {delta} (n = {n}, t = {t})");
                }
                return Ok((n, t));
            }
            _ => bail!("--h and --delta go together"),
        }
        let n = self.n.context("--n is required")?;
        let t = match (self.family, self.t) {
            (Family::Path, None) => 0,
            (_, Some(t)) => t,
            (_, None) => bail!("--t is required"),
        };
        Ok((n, t))
    }
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "bifurcation")]
    algo: Algo,
    /// ψ for bifurcation search; defaults to ⌈√t⌉.
    #[arg(long)]
    psi: Option<u64>,
    /// Write the record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print the tree dump (`id kind parent side`) to stderr.
    #[arg(long)]
    dump: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "random")]
    family: Vec<Family>,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<u32>,
    /// ψ values for bifurcation search; omit for ⌈√t⌉.
    #[arg(long, value_delimiter = ',')]
    psi: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "bifurcation,rounds,full")]
    algo: Vec<Algo>,
    /// Base seed; trial k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: u64,
    #[arg(long, default_value = "random_node")]
    target: TargetStrategy,
    /// CSV file to append to. Rows already present are skipped.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long)]
    h: u32,
    /// balanced_bisect, greedy_cheapest or random:SEED.
    #[arg(long, default_value = "balanced_bisect")]
    strategy: GameStrategy,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Queries strictly inside the active range while it holds more than two labels.
    Sensible,
    /// Any query inside the active range.
    InRange,
}

#[derive(Args)]
struct MinimaxArgs {
    /// Largest height to solve; every height from 1 up is printed.
    #[arg(long)]
    h: u32,
    #[arg(long, value_enum, default_value = "sensible")]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdversaryArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    /// Players to run; all three by default.
    #[arg(long, value_delimiter = ',', default_value = "bifurcation,rounds,full")]
    algo: Vec<Algo>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Sweep CSV to read.
    csv: PathBuf,
    /// steps, oracle_calls or cost.
    #[arg(long, default_value = "steps")]
    metric: Metric,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn run_search(args: SearchArgs) -> Result<()> {
    let (n, t) = args.instance.resolve()?;
    let spec = FamilySpec {
        family: args.instance.family,
        n,
        t,
        seed: args.instance.seed,
        target: args.instance.target,
    };
    if args.dump {
        eprint!("{}", spec.build()?.dump());
    }
    let outcome = run_experiment(&spec, args.algo, args.psi)?;
    if !outcome.audit.is_clean() {
        bail!("trim audit failed: {}", outcome.audit.violations.join("; "));
    }
    if !outcome.record.found {
        bail!(
            "{} returned {} instead of the target",
            args.algo,
            outcome.result.found
        );
    }
    write_records(&[outcome.record], output(&args.out)?)?;
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let grid = SweepGrid {
        families: args.family,
        ns: args.n,
        ts: args.t,
        psis: if args.psi.is_empty() {
            vec![None]
        } else {
            args.psi.into_iter().map(Some).collect()
        },
        algos: args.algo,
        trials: args.trials,
        base_seed: args.seed,
        target: args.target,
    };
    let summary = sweep(&grid, &args.out)?;
    eprintln!(
        "wrote {} records to {} ({} already present)",
        summary.written,
        args.out.display(),
        summary.skipped
    );
    Ok(())
}

fn run_game(args: GameArgs) -> Result<()> {
    let transcript = play_game(args.strategy, args.h)?;
    output(&args.out)?.write_all(transcript.to_csv().as_bytes())?;
    eprintln!(
        "total price {} in {} queries",
        transcript.total_price,
        transcript.steps.len()
    );
    Ok(())
}

fn run_minimax(args: MinimaxArgs) -> Result<()> {
    let rule = match args.mode {
        Mode::Sensible => QueryRule::Sensible,
        Mode::InRange => QueryRule::InRange,
    };
    let mut out = output(&args.out)?;
    writeln!(out, "h,minimax_price")?;
    for h in 1..=args.h {
        writeln!(out, "{h},{}", minimax_price_with(h, rule)?)?;
    }
    Ok(())
}

fn run_adversary(args: AdversaryArgs) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output(&args.out)?);
    for player in args.algo {
        let report = adaptive_fork_adversary(args.n, args.t, player)?;
        if report.replay_mismatches != 0 {
            bail!(
                "{player}: {} answers disagree with the committed target",
                report.replay_mismatches
            );
        }
        writer.serialize(&report)?;
    }
    writer.flush()?;
    Ok(())
}

fn run_fit(args: FitArgs) -> Result<()> {
    let records = read_records(&args.csv)?;
    let mut out = output(&args.out)?;
    writeln!(
        out,
        "algo,n_exponent,t_exponent,intercept,residual_rms,cells"
    )?;
    for fit in fit_scaling(&records, args.metric)? {
        writeln!(
            out,
            "{},{:.4},{:.4},{:.4},{:.4},{}",
            fit.algo, fit.n_exponent, fit.t_exponent, fit.intercept, fit.residual_rms, fit.cells
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Search(args) => run_search(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Game(args) => run_game(args),
        Command::Minimax(args) => run_minimax(args),
        Command::Adversary(args) => run_adversary(args),
        Command::Fit(args) => run_fit(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
