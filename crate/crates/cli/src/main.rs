use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gffx_cli::config::ExperimentConfig;
use gffx_cli::experiments::{emit_result, run_experiment};

/// Lattice Gaussian free field toolkit: Green's functions, exact field
/// samplers, and extreme-value experiments.
#[derive(Parser)]
#[command(name = "gffx", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker thread count override (results do not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the infinite-volume Green's function (canonical points).
    Green,
    /// Write one field realization (CSV + JSON sidecar).
    Sample,
    /// Gumbel convergence of the rescaled maximum.
    Gumbel,
    /// Law of large numbers for the maximum.
    Lln,
    /// Poisson-approximation bound tables and the exact-instance gap.
    Bounds,
    /// Markov-property identity residuals and boundary-drift exceedance.
    MarkovCheck,
    /// Monte Carlo ground truth on a small site set.
    Oracle,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Green => "green",
            Command::Sample => "sample",
            Command::Gumbel => "gumbel",
            Command::Lln => "lln",
            Command::Bounds => "bounds",
            Command::MarkovCheck => "markov-check",
            Command::Oracle => "oracle",
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(workers) = cli.workers {
        cfg.workers = Some(workers);
    }
    if let Some(out) = cli.out {
        cfg.out_dir = out;
    }
    let result = run_experiment(cli.command.name(), &cfg)?;
    let csv_path = emit_result(&result, &cfg.out_dir)?;
    println!(
        "{}: {} rows -> {} ({:.2}s)",
        result.experiment,
        result.rows.len(),
        csv_path.display(),
        result.wall_seconds
    );
    for check in &result.checks {
        println!(
            "  [{}] {}: {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    Ok(result.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
