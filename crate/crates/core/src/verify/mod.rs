//! Monte Carlo experiments.

pub mod convergence;
pub mod growth;
pub mod invariance;
pub mod stats;
pub mod strichartz;
pub mod tails;

pub use convergence::{convergence_experiment, ConvergenceReport, ConvergenceRow};
pub use growth::{default_checkpoints, growth_experiment, GrowthOptions, GrowthReport};
pub use invariance::{
    evaluate_observables, invariance_test, InvarianceOptions, InvarianceReport, Observable, ObservableComparison,
};
pub use stats::{bootstrap_ks_threshold, weighted_ks, weighted_mean_se, weighted_quantile};
pub use strichartz::{admissible_q, strichartz_probe, strichartz_ratio, StrichartzReport};
pub use tails::{exp_moment_check, tail_check, MomentCheck, TailReport, TailRow};
