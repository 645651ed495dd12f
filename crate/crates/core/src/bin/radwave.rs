//! Command-line front end: `radwave <experiment> [--config PATH] [--seed U64] [--out DIR] [--threads N]`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use radwave::io::{resolve_output_dir, run_with_threads, Experiment, SimConfig, OUTPUT_ENV};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Sample,
    Evolve,
    Invariance,
    Growth,
    Converge,
    Strichartz,
    Validate,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Sample => Experiment::Sample,
            Command::Evolve => Experiment::Evolve,
            Command::Invariance => Experiment::Invariance,
            Command::Growth => Experiment::Growth,
            Command::Converge => Experiment::Converge,
            Command::Strichartz => Experiment::Strichartz,
            Command::Validate => Experiment::Validate,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "radwave",
    version,
    about = "Galerkin wave simulator and Gibbs-measure experiments"
)]
#[command(after_help = format!("Without --out, runs go to ${OUTPUT_ENV}/<experiment>-<timestamp> (default root: ./runs)."))]
struct Cli {
    #[arg(value_enum)]
    experiment: Command,
    /// Flat key = value config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides master_seed from the config.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Run directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads, 0 = one per core.
    #[arg(long, value_name = "INT", default_value_t = 0)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let loaded = match &cli.config {
        Some(path) => SimConfig::load(path),
        None => Ok(SimConfig::default()),
    };
    let mut config = match loaded {
        Ok(c) => c,
        Err(e) => return fail(&e.to_string()),
    };
    config.experiment = cli.experiment.into();
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    let out = resolve_output_dir(cli.out.as_deref(), &config);
    match run_with_threads(&config, &out, cli.threads) {
        Ok(outcome) => {
            let line = serde_json::json!({
                "experiment": outcome.experiment,
                "passed": outcome.passed(),
                "failures": outcome.failures(),
                "out_dir": outcome.out_dir,
            });
            println!("{line}");
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(&e.to_string()),
    }
}

fn fail(message: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "passed": false, "error": message }));
    ExitCode::from(2)
}
