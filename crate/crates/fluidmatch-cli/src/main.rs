//! `fluidmatch` — solve matching-rate problems, build priority policies,
//! and run discrete-review matching simulations from TOML configs.

mod config;
mod experiments;
mod validate;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use config::FileConfig;
use experiments::RunContext;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fluidmatch",
    version,
    about = "Matching-rate optimization and discrete-review matching simulation"
)]
struct Cli {
    /// Override the config's random seed.
    #[arg(long, global = true, env = "FLUIDMATCH_SEED")]
    seed: Option<u64>,

    /// Worker threads for replications (default: all cores).
    #[arg(long, global = true, env = "FLUIDMATCH_JOBS")]
    jobs: Option<usize>,

    /// Write CSV output here, overriding the config's `out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress progress and summary text (CSV output is unaffected).
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize matching rates and report the solution and invariants.
    Solve(ConfigArg),
    /// Build the priority-set policy for the optimal extreme point.
    PrioritySets(ConfigArg),
    /// Run simulation replications for a single parameter cell.
    Simulate(ConfigArg),
    /// Run a full parameter sweep, one CSV row per cell per replication.
    Sweep(ConfigArg),
    /// Run a built-in diagnostic suite.
    Validate {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Closed-form queues, trajectory settling, exact conservation.
    Invariants,
    /// Exact birth-death chain against the fluid point.
    Markov,
    /// Enumerated polytope vertices against the independent vertex test.
    ExtremePoints,
    /// Scaled simulation queues approaching the fluid invariant.
    Convergence,
}

/// Errors before any computation starts (bad flags, unreadable or invalid
/// configs) exit with 2; failures during execution exit with 1.
fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = RunContext { seed: cli.seed, out: cli.out, quiet: cli.quiet };

    let loaded = match &cli.command {
        Command::Solve(a) | Command::PrioritySets(a) | Command::Simulate(a) | Command::Sweep(a) => {
            match FileConfig::load(&a.config) {
                Ok(cfg) => Some(cfg),
                Err(e) => {
                    eprintln!("config error: {e:#}");
                    return ExitCode::from(2);
                }
            }
        }
        Command::Validate { .. } => None,
    };

    let outcome: Result<bool> = match &cli.command {
        Command::Solve(_) | Command::PrioritySets(_) | Command::Simulate(_) | Command::Sweep(_) => {
            experiments::dispatch(&loaded.unwrap(), &ctx).map(|()| true)
        }
        Command::Validate { suite } => match suite {
            Suite::Invariants => validate::run_invariants(&ctx),
            Suite::Markov => validate::run_markov(&ctx),
            Suite::ExtremePoints => validate::run_extreme_points(&ctx),
            Suite::Convergence => validate::run_convergence(&ctx),
        },
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
