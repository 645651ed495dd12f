//! Gaussian measure `mu_N`, Gibbs reweighting to `rho_N`, and Gaussian tail formulas.

pub mod ensemble;
pub mod rng;
pub mod tail;

pub use ensemble::{gibbs_log_weight, sample_ensemble, sample_gaussian, WeightedEnsemble};
pub use rng::KeyedStream;
pub use tail::{exp_moment_product, exp_moment_product_raw, tail_probability_bound, MomentSign, TailParameter};
