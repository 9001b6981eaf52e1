//! Drives the experiment harness from a TOML configuration, as the `softucb`
//! binary does, and lists what it wrote.
//!
//!     cargo run --release --example experiment_config -- [config.toml] [out_dir]
//!
//! Without arguments it runs a small built-in comparison into
//! `target/example-experiment`.

use std::path::PathBuf;

use softucb::harness::{parse_config, run_experiment, ExperimentOptions, ExperimentSpec};

const BUILT_IN: &str = r#"
mode = "compare"
seeds = [0, 1, 2, 3]
algorithms = ["softucb-offline", "softucb-online", "linucb", "lints", "eps-greedy"]

[environment]
arms = 30
dim = 5

[run]
horizon = 256

[training]
trajectories = 150
eta = 0.003
schedule = "robbins-monro"
learning_rate = 0.02
online_eta = 1.0
online_schedule = "constant"
online_learning_rate = 0.05
"#;

fn main() -> softucb::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = match args.next() {
        Some(path) => parse_config(path.as_ref())?,
        None => {
            let spec = ExperimentSpec::from_toml_str(BUILT_IN).expect("built-in config parses");
            spec.validate().expect("built-in config is valid");
            spec
        }
    };
    let out = args
        .next()
        .map_or_else(|| PathBuf::from("target/example-experiment"), PathBuf::from);

    let outcome = run_experiment(
        &spec,
        &out,
        &ExperimentOptions {
            jobs: 0,
            verbose: true,
        },
    )?;
    for file in &outcome.files {
        println!("{}", file.display());
    }
    if let Some(row) = &outcome.beta_table {
        println!(
            "{}",
            softucb::harness::beta_table_markdown(std::slice::from_ref(row))
        );
    }
    for b in &outcome.breaches {
        println!("threshold exceeded: {b}");
    }
    Ok(())
}
