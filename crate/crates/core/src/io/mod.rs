//! Configuration, persistence formats and experiment orchestration.

pub mod config;
pub mod format;
pub mod run;

pub use config::{Experiment, SimConfig};
pub use format::{fmt_f64, parse_f64, Table};
pub use run::{resolve_output_dir, run, run_with_threads, validation_suite, Check, RunOutcome, OUTPUT_ENV};
