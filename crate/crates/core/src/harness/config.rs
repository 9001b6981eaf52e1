//! Experiment configuration files.
//!
//! A configuration is a TOML document. Every table rejects unknown keys, every
//! omitted key takes the default listed on its field, and validation errors
//! name the offending key.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::env::NoiseKind;
use crate::error::{io_err, Error, Result};
use crate::gradient::{OnlineMode, Schedule};
use crate::runners::{BoundParams, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    TrainOffline,
    TrainOnline,
    Compare,
    Ingest,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::TrainOffline => "train-offline",
            Mode::TrainOnline => "train-online",
            Mode::Compare => "compare",
            Mode::Ingest => "ingest",
        }
    }

    fn default_algorithms(self) -> Vec<Algorithm> {
        match self {
            Mode::Simulate => vec![Algorithm::Softucb],
            Mode::TrainOffline => vec![Algorithm::SoftucbOffline],
            Mode::TrainOnline => vec![Algorithm::SoftucbOnline],
            Mode::Compare => vec![
                Algorithm::SoftucbOffline,
                Algorithm::Linucb,
                Algorithm::Lints,
                Algorithm::EpsGreedy,
            ],
            Mode::Ingest => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// SoftUCB at the fixed width `run.beta`.
    Softucb,
    /// SoftUCB at the width learned by offline training.
    SoftucbOffline,
    /// SoftUCB with the width learned online within the trajectory.
    SoftucbOnline,
    Linucb,
    Lints,
    EpsGreedy,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Softucb => "softucb",
            Algorithm::SoftucbOffline => "softucb-offline",
            Algorithm::SoftucbOnline => "softucb-online",
            Algorithm::Linucb => "linucb",
            Algorithm::Lints => "lints",
            Algorithm::EpsGreedy => "eps-greedy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EnvKind {
    /// Unit-norm random arms with a random unit parameter.
    #[default]
    Synthetic,
    /// A raw rating-matrix CSV, imputed and reduced on load.
    Ratings,
    /// Feature and mean CSVs written by `ingest`.
    Features,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSpec {
    pub kind: EnvKind,
    pub arms: usize,
    pub dim: usize,
    pub noise: NoiseKind,
    pub noise_scale: f64,
    /// Use this instance seed for every run seed instead of one instance per seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub env_seed: Option<u64>,
    /// Rating matrix (`ratings`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Column holding the rewards; defaults to the last column.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub held_out: Option<usize>,
    /// Factorization rank; defaults to `dim`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub regularization: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub means_path: Option<PathBuf>,
}

impl Default for EnvironmentSpec {
    fn default() -> Self {
        Self {
            kind: EnvKind::Synthetic,
            arms: 50,
            dim: 10,
            noise: NoiseKind::Gaussian,
            noise_scale: 0.5,
            env_seed: None,
            path: None,
            held_out: None,
            rank: None,
            regularization: 0.1,
            iterations: 100,
            features_path: None,
            means_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub horizon: usize,
    pub delta: f64,
    pub alpha: f64,
    /// Fixed width for `softucb`; defaults to the theoretical width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub epsilon: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            horizon: 1024,
            delta: 0.99,
            alpha: 1.0,
            beta: None,
            epsilon: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingSection {
    pub trajectories: usize,
    pub learning_rate: f64,
    pub eta: f64,
    pub schedule: Schedule,
    /// Learning rate for online training; defaults to `learning_rate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub online_learning_rate: Option<f64>,
    /// Multiplier for online training; defaults to `eta`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub online_eta: Option<f64>,
    /// Schedule for online training; defaults to `schedule`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub online_schedule: Option<Schedule>,
    pub online_mode: OnlineMode,
    pub stop_at_convergence: bool,
}

impl Default for TrainingSection {
    fn default() -> Self {
        Self {
            trajectories: 100,
            learning_rate: 0.05,
            eta: 0.01,
            schedule: Schedule::Constant,
            online_learning_rate: None,
            online_eta: None,
            online_schedule: None,
            online_mode: OnlineMode::Cached,
            stop_at_convergence: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BaselineSection {
    /// Sub-Gaussian scale `R` in the theoretical width.
    pub noise_scale: f64,
    pub delta: f64,
    pub theta_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linucb_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lints_scale: Option<f64>,
}

impl Default for BaselineSection {
    fn default() -> Self {
        let b = BoundParams::default();
        Self {
            noise_scale: b.noise_scale,
            delta: b.delta,
            theta_bound: b.theta_bound,
            linucb_beta: None,
            lints_scale: None,
        }
    }
}

/// Thresholds that turn diagnostics into a failing exit status. Unset
/// thresholds are reporting-only.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_gamma_cap_events: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_constraint_violations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub mode: Mode,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub training: TrainingSection,
    #[serde(default)]
    pub baseline: BaselineSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
}

/// Reads, defaults and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<ExperimentSpec> {
    let spec = load_config(path)?;
    spec.validate().map_err(|message| Error::Config {
        path: path.to_path_buf(),
        message,
    })?;
    Ok(spec)
}

/// Reads and defaults a configuration file without validating it, so that
/// command-line overrides can be applied first.
pub fn load_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    ExperimentSpec::from_toml_str(&text).map_err(|message| Error::Config {
        path: path.to_path_buf(),
        message,
    })
}

impl ExperimentSpec {
    /// Parses TOML text and fills mode-dependent defaults.
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        let mut spec: ExperimentSpec = toml::from_str(text).map_err(|e| e.to_string())?;
        if spec.algorithms.is_empty() {
            spec.algorithms = spec.mode.default_algorithms();
        }
        Ok(spec)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("experiment specs always serialize")
    }

    /// Checks every field; the message names the offending key.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.seeds.is_empty() {
            return Err("seeds: at least one seed is required".into());
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(s) = self.seeds.iter().find(|s| !seen.insert(**s)) {
            return Err(format!("seeds: seed {s} is listed twice"));
        }

        let env = &self.environment;
        if env.arms < 2 {
            return Err(format!(
                "environment.arms must be at least 2, got {}",
                env.arms
            ));
        }
        if env.dim == 0 {
            return Err("environment.dim must be at least 1".into());
        }
        if !(env.noise_scale >= 0.0 && env.noise_scale.is_finite()) {
            return Err(format!(
                "environment.noise_scale must be nonnegative, got {}",
                env.noise_scale
            ));
        }
        if !(env.regularization >= 0.0 && env.regularization.is_finite()) {
            return Err(format!(
                "environment.regularization must be nonnegative, got {}",
                env.regularization
            ));
        }
        if env.rank == Some(0) {
            return Err("environment.rank must be at least 1".into());
        }
        match env.kind {
            EnvKind::Ratings if env.path.is_none() => {
                return Err("environment.path is required when kind = \"ratings\"".into())
            }
            EnvKind::Features if env.features_path.is_none() => {
                return Err("environment.features_path is required when kind = \"features\"".into())
            }
            EnvKind::Features if env.means_path.is_none() => {
                return Err("environment.means_path is required when kind = \"features\"".into())
            }
            _ => {}
        }

        let run = &self.run;
        if run.horizon == 0 {
            return Err("run.horizon must be at least 1".into());
        }
        if !(run.delta > 0.0 && run.delta < 1.0) {
            return Err(format!("run.delta must lie in (0, 1), got {}", run.delta));
        }
        if !(run.alpha > 0.0 && run.alpha.is_finite()) {
            return Err(format!("run.alpha must be positive, got {}", run.alpha));
        }
        if let Some(b) = run.beta {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(format!("run.beta must be nonnegative, got {b}"));
            }
        }
        if !(0.0..=1.0).contains(&run.epsilon) {
            return Err(format!(
                "run.epsilon must lie in [0, 1], got {}",
                run.epsilon
            ));
        }

        let tr = &self.training;
        if tr.trajectories == 0 {
            return Err("training.trajectories must be at least 1".into());
        }
        for (key, v) in [
            ("training.learning_rate", Some(tr.learning_rate)),
            ("training.online_learning_rate", tr.online_learning_rate),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(format!("{key} must be nonnegative, got {v}"));
                }
            }
        }
        for (key, v) in [
            ("training.eta", Some(tr.eta)),
            ("training.online_eta", tr.online_eta),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(format!("{key} must be positive, got {v}"));
                }
            }
        }

        let b = &self.baseline;
        if !(b.noise_scale >= 0.0 && b.noise_scale.is_finite()) {
            return Err(format!(
                "baseline.noise_scale must be nonnegative, got {}",
                b.noise_scale
            ));
        }
        if !(b.delta > 0.0 && b.delta < 1.0) {
            return Err(format!(
                "baseline.delta must lie in (0, 1), got {}",
                b.delta
            ));
        }
        if !(b.theta_bound >= 0.0 && b.theta_bound.is_finite()) {
            return Err(format!(
                "baseline.theta_bound must be nonnegative, got {}",
                b.theta_bound
            ));
        }
        for (key, v) in [
            ("baseline.linucb_beta", b.linucb_beta),
            ("baseline.lints_scale", b.lints_scale),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(format!("{key} must be nonnegative, got {v}"));
                }
            }
        }

        match self.mode {
            Mode::Ingest => {
                if env.kind != EnvKind::Ratings {
                    return Err("environment.kind must be \"ratings\" in ingest mode".into());
                }
            }
            Mode::TrainOffline if !self.algorithms.contains(&Algorithm::SoftucbOffline) => {
                return Err(
                    "algorithms must include \"softucb-offline\" in train-offline mode".into(),
                )
            }
            Mode::TrainOnline if !self.algorithms.contains(&Algorithm::SoftucbOnline) => {
                return Err(
                    "algorithms must include \"softucb-online\" in train-online mode".into(),
                )
            }
            _ if self.algorithms.is_empty() => {
                return Err("algorithms: at least one algorithm is required".into())
            }
            _ => {}
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(a) = self.algorithms.iter().find(|a| !seen.insert(**a)) {
            return Err(format!("algorithms: \"{}\" is listed twice", a.name()));
        }
        Ok(())
    }

    /// Width for fixed-width SoftUCB runs.
    pub fn fixed_beta(&self, dim: usize) -> Result<f64> {
        match self.run.beta {
            Some(b) => Ok(b),
            None => crate::runners::theoretical_beta(
                self.baseline.noise_scale,
                self.baseline.delta,
                dim,
                self.run.horizon,
                self.run.alpha,
                self.baseline.theta_bound,
            ),
        }
    }

    /// Runner configuration for offline training and fixed-width runs.
    pub fn run_config(&self) -> RunConfig {
        let tr = &self.training;
        RunConfig {
            horizon: self.run.horizon,
            delta: self.run.delta,
            alpha: self.run.alpha,
            beta: self.run.beta.unwrap_or(0.0),
            trajectories: tr.trajectories,
            learning_rate: tr.learning_rate,
            eta: tr.eta,
            schedule: tr.schedule,
            online_mode: tr.online_mode,
            epsilon: self.run.epsilon,
            bound: BoundParams {
                noise_scale: self.baseline.noise_scale,
                delta: self.baseline.delta,
                theta_bound: self.baseline.theta_bound,
            },
            linucb_beta: self.baseline.linucb_beta,
            lints_scale: self.baseline.lints_scale,
            keep_training_logs: false,
            stop_at_convergence: tr.stop_at_convergence,
        }
    }

    /// Runner configuration for online training.
    pub fn online_run_config(&self) -> RunConfig {
        let tr = &self.training;
        RunConfig {
            learning_rate: tr.online_learning_rate.unwrap_or(tr.learning_rate),
            eta: tr.online_eta.unwrap_or(tr.eta),
            schedule: tr.online_schedule.unwrap_or(tr.schedule),
            ..self.run_config()
        }
    }
}
