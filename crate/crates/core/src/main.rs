use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use softucb::harness::{load_config, run_experiment, ExperimentOptions, Mode};

/// SoftUCB experiment runner.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run fixed-width SoftUCB or any listed algorithms.
    Simulate(Common),
    /// Learn the width offline over repeated trajectories.
    TrainOffline(Common),
    /// Learn the width online within each trajectory.
    TrainOnline(Common),
    /// Run several algorithms on the same instances.
    Compare(Common),
    /// Impute and reduce a rating matrix into feature files.
    Ingest(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory; overrides the config file and SOFTUCB_OUT.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Seeds as a list (`1,2,3`) or half-open range (`0..20`).
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<SeedList>,
    /// Worker threads; 0 uses every core.
    #[arg(short, long, default_value_t = 0)]
    jobs: usize,
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Clone)]
struct SeedList(Vec<u64>);

fn parse_seeds(text: &str) -> Result<SeedList, String> {
    let bad = |e: std::num::ParseIntError| format!("invalid seed list `{text}`: {e}");
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (
            a.trim().parse::<u64>().map_err(bad)?,
            b.trim().parse::<u64>().map_err(bad)?,
        );
        if a >= b {
            return Err(format!("empty seed range `{text}`"));
        }
        return Ok(SeedList((a..b).collect()));
    }
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(bad))
        .collect::<Result<_, _>>()
        .map(SeedList)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::TrainOffline(a) => (Mode::TrainOffline, a),
        Command::TrainOnline(a) => (Mode::TrainOnline, a),
        Command::Compare(a) => (Mode::Compare, a),
        Command::Ingest(a) => (Mode::Ingest, a),
    };
    match run(mode, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(mode: Mode, args: Common) -> softucb::Result<bool> {
    let mut spec = load_config(&args.config)?;
    if spec.mode != mode {
        return Err(softucb::Error::Config {
            path: args.config,
            message: format!(
                "mode = \"{}\" does not match the `{}` subcommand",
                spec.mode.name(),
                mode.name()
            ),
        });
    }
    if let Some(seeds) = args.seeds {
        spec.seeds = seeds.0;
    }
    spec.validate().map_err(|message| softucb::Error::Config {
        path: args.config.clone(),
        message,
    })?;

    let out = args
        .out
        .or_else(|| spec.output_dir.clone())
        .or_else(|| std::env::var_os("SOFTUCB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    let options = ExperimentOptions {
        jobs: args.jobs,
        verbose: args.verbose,
    };
    let outcome = run_experiment(&spec, &out, &options)?;
    if args.verbose {
        eprintln!("wrote {} files to {}", outcome.files.len(), out.display());
    }
    if let Some(row) = &outcome.beta_table {
        println!(
            "learned beta {:.4} ± {:.4} (theoretical {:.4}, ratio {:.3}, converged {}/{})",
            row.beta_hat,
            row.beta_hat_stderr,
            row.beta_theory,
            row.ratio(),
            row.converged_seeds,
            row.seeds
        );
    }
    for breach in &outcome.breaches {
        eprintln!("threshold exceeded: {breach}");
    }
    Ok(outcome.succeeded())
}
