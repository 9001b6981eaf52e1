//! Runs a configured experiment and writes its outputs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{Algorithm, EnvKind, ExperimentSpec, Mode};
use super::ingest::{
    prepare_ratings, ratings_environment, read_features, run_ingest, PreparedRatings,
};
use super::output::{
    beta_table_markdown, beta_table_records, mean_stderr, summarize_curves, write_csv_file,
    BetaTableRow, BETA_TABLE_HEADER,
};
use super::svg::{line_chart, Series};
use crate::env::{make_synthetic_with, Environment};
use crate::error::{invalid, io_err, Error, Result};
use crate::rng::{stream, Purpose};
use crate::runners::{
    run_epsilon_greedy, run_lints, run_linucb, run_softucb, theoretical_beta, train_offline,
    train_online, BetaStep, Diagnostics, RunResult,
};

/// Name of the marker file present while outputs are incomplete.
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

#[derive(Debug, Clone, Default)]
pub struct ExperimentOptions {
    /// Worker threads; 0 uses all available cores.
    pub jobs: usize,
    pub verbose: bool,
}

/// Curves and diagnostics of one algorithm on one seed.
#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub expected_regret: Vec<f64>,
    pub realized_reward: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Offline training summary for one seed.
#[derive(Debug, Clone)]
pub struct TrainingRecord {
    pub beta_hat: f64,
    pub trace: Vec<BetaStep>,
    /// Final expected regret of each training trajectory.
    pub trajectory_regret: Vec<f64>,
    pub converged_at: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SeedOutcome {
    pub seed: u64,
    pub dim: usize,
    pub runs: Vec<AlgorithmRun>,
    pub offline: Option<TrainingRecord>,
    pub online_trace: Option<Vec<BetaStep>>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub seeds: Vec<SeedOutcome>,
    pub beta_table: Option<BetaTableRow>,
    /// Diagnostic thresholds that were exceeded, one message each.
    pub breaches: Vec<String>,
}

impl ExperimentOutcome {
    pub fn succeeded(&self) -> bool {
        self.breaches.is_empty()
    }
}

/// Runs `spec`, writing every output into `out_dir`.
///
/// An `INCOMPLETE` marker holds the error message if the run fails partway.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
    options: &ExperimentOptions,
) -> Result<ExperimentOutcome> {
    spec.validate().map_err(|message| Error::Config {
        path: out_dir.join("config.toml"),
        message,
    })?;
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let marker = out_dir.join(INCOMPLETE_MARKER);
    std::fs::write(&marker, "run in progress\n").map_err(io_err(&marker))?;

    match execute(spec, out_dir, options) {
        Ok(outcome) => {
            std::fs::remove_file(&marker).map_err(io_err(&marker))?;
            Ok(outcome)
        }
        Err(e) => {
            let _ = std::fs::write(&marker, format!("run failed: {e}\n"));
            Err(e)
        }
    }
}

fn execute(
    spec: &ExperimentSpec,
    out_dir: &Path,
    options: &ExperimentOptions,
) -> Result<ExperimentOutcome> {
    let mut files = Vec::new();
    let mut resolved = spec.clone();
    resolved.output_dir = None;
    let config_path = out_dir.join("config.toml");
    std::fs::write(&config_path, resolved.to_toml_string()).map_err(io_err(&config_path))?;
    files.push(config_path);

    if spec.mode == Mode::Ingest {
        files.extend(run_ingest(spec, out_dir)?);
        return Ok(ExperimentOutcome {
            out_dir: out_dir.to_path_buf(),
            files,
            seeds: Vec::new(),
            beta_table: None,
            breaches: Vec::new(),
        });
    }

    let source = EnvSource::load(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    let seeds: Vec<SeedOutcome> = pool.install(|| {
        spec.seeds
            .par_iter()
            .map(|&seed| {
                let out = run_seed(spec, &source, seed);
                if options.verbose {
                    eprintln!(
                        "seed {seed}: {}",
                        if out.is_ok() { "done" } else { "failed" }
                    );
                }
                out
            })
            .collect::<Result<Vec<_>>>()
    })?;

    files.extend(write_seed_files(out_dir, &seeds)?);
    files.extend(write_summary(spec, out_dir, &seeds)?);
    let beta_table = if spec.algorithms.contains(&Algorithm::SoftucbOffline) {
        let (row, written) = write_offline_outputs(spec, out_dir, &seeds)?;
        files.extend(written);
        Some(row)
    } else {
        None
    };
    if spec.algorithms.contains(&Algorithm::SoftucbOnline) {
        files.extend(write_online_outputs(out_dir, &seeds)?);
    }
    files.push(write_diagnostics(out_dir, &seeds)?);

    let breaches = check_thresholds(spec, &seeds);
    if options.verbose {
        for b in &breaches {
            eprintln!("threshold exceeded: {b}");
        }
    }
    Ok(ExperimentOutcome {
        out_dir: out_dir.to_path_buf(),
        files,
        seeds,
        beta_table,
        breaches,
    })
}

enum EnvSource {
    Synthetic,
    Ratings(Box<PreparedRatings>),
    Fixed(Environment),
}

impl EnvSource {
    fn load(spec: &ExperimentSpec) -> Result<Self> {
        let env = &spec.environment;
        Ok(match env.kind {
            EnvKind::Synthetic => EnvSource::Synthetic,
            EnvKind::Ratings => EnvSource::Ratings(Box::new(prepare_ratings(spec)?)),
            EnvKind::Features => EnvSource::Fixed(read_features(
                env.features_path.as_deref().expect("validated"),
                env.means_path.as_deref().expect("validated"),
                env.noise.with_scale(env.noise_scale),
            )?),
        })
    }

    fn instance(&self, spec: &ExperimentSpec, seed: u64) -> Result<Environment> {
        let env = &spec.environment;
        let instance_seed = env.env_seed.unwrap_or(seed);
        match self {
            EnvSource::Synthetic => make_synthetic_with(
                env.arms,
                env.dim,
                env.noise.with_scale(env.noise_scale),
                instance_seed,
            ),
            EnvSource::Ratings(prepared) => {
                Ok(ratings_environment(spec, prepared, instance_seed)?.env)
            }
            EnvSource::Fixed(e) => Ok(e.clone()),
        }
    }
}

/// Every algorithm on one seed. Evaluation runs share the seed's run stream
/// from its start; training draws from its own stream.
fn run_seed(spec: &ExperimentSpec, source: &EnvSource, seed: u64) -> Result<SeedOutcome> {
    let env = source.instance(spec, seed)?;
    let cfg = spec.run_config();
    let mut runs = Vec::with_capacity(spec.algorithms.len());
    let mut offline = None;
    let mut online_trace = None;

    for &algorithm in &spec.algorithms {
        let mut rng = stream(seed, Purpose::Run);
        let result: RunResult = match algorithm {
            Algorithm::Softucb => run_softucb(&env, &cfg, spec.fixed_beta(env.dim())?, &mut rng)?,
            Algorithm::SoftucbOffline => {
                let training = train_offline(&env, &cfg, &mut stream(seed, Purpose::Training))?;
                let result = run_softucb(&env, &cfg, training.beta_hat, &mut rng)?;
                offline = Some(TrainingRecord {
                    beta_hat: training.beta_hat,
                    trajectory_regret: training
                        .traces
                        .iter()
                        .map(RunResult::final_regret)
                        .collect(),
                    trace: training.beta_trace,
                    converged_at: training.converged_at,
                });
                result
            }
            Algorithm::SoftucbOnline => {
                let result = train_online(&env, &spec.online_run_config(), &mut rng)?;
                online_trace = Some(result.beta_trace.clone());
                result
            }
            Algorithm::Linucb => run_linucb(&env, &cfg, &mut rng)?,
            Algorithm::Lints => run_lints(&env, &cfg, &mut rng)?,
            Algorithm::EpsGreedy => run_epsilon_greedy(&env, &cfg, &mut rng)?,
        };
        runs.push(AlgorithmRun {
            algorithm,
            expected_regret: result.expected_regret_curve,
            realized_reward: result.realized_reward_curve,
            diagnostics: result.diagnostics,
        });
    }
    Ok(SeedOutcome {
        seed,
        dim: env.dim(),
        runs,
        offline,
        online_trace,
    })
}

fn write_seed_files(out_dir: &Path, seeds: &[SeedOutcome]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for s in seeds {
        let path = out_dir.join(format!("regret_seed{}.csv", s.seed));
        write_csv_file(
            &path,
            &[
                "seed",
                "algorithm",
                "round",
                "expected_regret",
                "realized_reward",
            ],
            s.runs.iter().flat_map(|run| {
                run.expected_regret
                    .iter()
                    .zip(&run.realized_reward)
                    .enumerate()
                    .map(move |(t, (r, y))| {
                        vec![
                            s.seed.to_string(),
                            run.algorithm.name().to_string(),
                            (t + 1).to_string(),
                            r.to_string(),
                            y.to_string(),
                        ]
                    })
            }),
        )?;
        files.push(path);
    }
    Ok(files)
}

fn write_summary(
    spec: &ExperimentSpec,
    out_dir: &Path,
    seeds: &[SeedOutcome],
) -> Result<Vec<PathBuf>> {
    let summaries: Vec<(Algorithm, Vec<(f64, f64)>)> = spec
        .algorithms
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let curves: Vec<&[f64]> = seeds
                .iter()
                .map(|s| s.runs[k].expected_regret.as_slice())
                .collect();
            (a, summarize_curves(&curves))
        })
        .collect();

    let path = out_dir.join("summary.csv");
    write_csv_file(
        &path,
        &["algorithm", "round", "mean_regret", "stderr"],
        summaries.iter().flat_map(|(a, rows)| {
            rows.iter().enumerate().map(move |(t, (m, se))| {
                vec![
                    a.name().to_string(),
                    (t + 1).to_string(),
                    m.to_string(),
                    se.to_string(),
                ]
            })
        }),
    )?;

    let series: Vec<Series> = summaries
        .iter()
        .map(|(a, rows)| Series {
            name: a.name(),
            points: rows
                .iter()
                .enumerate()
                .map(|(t, (m, _))| ((t + 1) as f64, *m))
                .collect(),
        })
        .collect();
    let chart = out_dir.join("regret.svg");
    let svg = line_chart(
        &format!("Mean cumulative expected regret over {} seeds", seeds.len()),
        "round",
        "cumulative regret",
        &series,
    );
    std::fs::write(&chart, svg).map_err(io_err(&chart))?;
    Ok(vec![path, chart])
}

fn write_offline_outputs(
    spec: &ExperimentSpec,
    out_dir: &Path,
    seeds: &[SeedOutcome],
) -> Result<(BetaTableRow, Vec<PathBuf>)> {
    let mut files = Vec::new();
    let records: Vec<&TrainingRecord> = seeds.iter().filter_map(|s| s.offline.as_ref()).collect();
    for (s, rec) in seeds.iter().zip(&records) {
        let path = out_dir.join(format!("beta_trace_seed{}.csv", s.seed));
        write_csv_file(
            &path,
            &["iteration", "beta", "gradient"],
            rec.trace.iter().map(|b| {
                vec![
                    b.iteration.to_string(),
                    b.beta.to_string(),
                    b.gradient.to_string(),
                ]
            }),
        )?;
        files.push(path);
        let path = out_dir.join(format!("training_regret_seed{}.csv", s.seed));
        write_csv_file(
            &path,
            &["iteration", "final_regret"],
            rec.trajectory_regret
                .iter()
                .enumerate()
                .map(|(n, r)| vec![(n + 1).to_string(), r.to_string()]),
        )?;
        files.push(path);
    }

    let dim = seeds[0].dim;
    let betas: Vec<f64> = records.iter().map(|r| r.beta_hat).collect();
    let (beta_hat, beta_hat_stderr) = mean_stderr(&betas);
    let row = BetaTableRow {
        dim,
        horizon: spec.run.horizon,
        seeds: records.len(),
        beta_hat,
        beta_hat_stderr,
        beta_theory: theoretical_beta(
            spec.baseline.noise_scale,
            spec.baseline.delta,
            dim,
            spec.run.horizon,
            spec.run.alpha,
            spec.baseline.theta_bound,
        )?,
        converged_seeds: records.iter().filter(|r| r.converged_at.is_some()).count(),
    };
    let path = out_dir.join("beta_table.csv");
    write_csv_file(
        &path,
        &BETA_TABLE_HEADER,
        beta_table_records(std::slice::from_ref(&row)),
    )?;
    files.push(path);
    let path = out_dir.join("beta_table.md");
    std::fs::write(&path, beta_table_markdown(std::slice::from_ref(&row)))
        .map_err(io_err(&path))?;
    files.push(path);

    let traces: Vec<Vec<f64>> = records
        .iter()
        .map(|r| r.trace.iter().map(|b| b.beta).collect())
        .collect();
    let trace_refs: Vec<&[f64]> = traces.iter().map(Vec::as_slice).collect();
    let regrets: Vec<&[f64]> = records
        .iter()
        .map(|r| r.trajectory_regret.as_slice())
        .collect();
    let mean_points = |curves: &[&[f64]]| -> Vec<(f64, f64)> {
        summarize_curves(curves)
            .into_iter()
            .enumerate()
            .map(|(n, (m, _))| ((n + 1) as f64, m))
            .collect()
    };
    for (name, title, y_label, points) in [
        (
            "beta_offline.svg",
            "Offline training: mean width",
            "beta",
            mean_points(&trace_refs),
        ),
        (
            "training_regret.svg",
            "Offline training: regret per trajectory",
            "cumulative regret at horizon",
            mean_points(&regrets),
        ),
    ] {
        let path = out_dir.join(name);
        let svg = line_chart(
            title,
            "training iteration",
            y_label,
            &[Series {
                name: "mean",
                points,
            }],
        );
        std::fs::write(&path, svg).map_err(io_err(&path))?;
        files.push(path);
    }
    Ok((row, files))
}

fn write_online_outputs(out_dir: &Path, seeds: &[SeedOutcome]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let mut traces = Vec::new();
    for s in seeds {
        let Some(trace) = &s.online_trace else {
            continue;
        };
        let path = out_dir.join(format!("online_beta_trace_seed{}.csv", s.seed));
        write_csv_file(
            &path,
            &["round", "beta", "gradient"],
            trace.iter().map(|b| {
                vec![
                    b.iteration.to_string(),
                    b.beta.to_string(),
                    b.gradient.to_string(),
                ]
            }),
        )?;
        files.push(path);
        traces.push(trace.iter().map(|b| b.beta).collect::<Vec<_>>());
    }
    let refs: Vec<&[f64]> = traces.iter().map(Vec::as_slice).collect();
    let points = summarize_curves(&refs)
        .into_iter()
        .enumerate()
        .map(|(t, (m, _))| ((t + 1) as f64, m))
        .collect();
    let path = out_dir.join("beta_online.svg");
    let svg = line_chart(
        "Online training: mean width",
        "round",
        "beta",
        &[Series {
            name: "mean",
            points,
        }],
    );
    std::fs::write(&path, svg).map_err(io_err(&path))?;
    files.push(path);
    Ok(files)
}

fn write_diagnostics(out_dir: &Path, seeds: &[SeedOutcome]) -> Result<PathBuf> {
    let path = out_dir.join("diagnostics.csv");
    write_csv_file(
        &path,
        &[
            "seed",
            "algorithm",
            "gamma_cap_events",
            "constraint_violations",
            "uniform_rounds",
            "empty_lower_rounds",
        ],
        seeds.iter().flat_map(|s| {
            s.runs.iter().map(move |r| {
                let d = r.diagnostics;
                vec![
                    s.seed.to_string(),
                    r.algorithm.name().to_string(),
                    d.gamma_cap_events.to_string(),
                    d.constraint_violations.to_string(),
                    d.uniform_rounds.to_string(),
                    d.empty_lower_rounds.to_string(),
                ]
            })
        }),
    )?;
    Ok(path)
}

fn check_thresholds(spec: &ExperimentSpec, seeds: &[SeedOutcome]) -> Vec<String> {
    let limits = &spec.diagnostics;
    let mut breaches = Vec::new();
    for s in seeds {
        for r in &s.runs {
            let d = r.diagnostics;
            if let Some(max) = limits.max_gamma_cap_events {
                if d.gamma_cap_events > max {
                    breaches.push(format!(
                        "seed {} {}: {} coldness-cap events exceed {max}",
                        s.seed,
                        r.algorithm.name(),
                        d.gamma_cap_events
                    ));
                }
            }
            if let Some(max) = limits.max_constraint_violations {
                if d.constraint_violations > max {
                    breaches.push(format!(
                        "seed {} {}: {} confidence violations exceed {max}",
                        s.seed,
                        r.algorithm.name(),
                        d.constraint_violations
                    ));
                }
            }
        }
    }
    breaches
}
