//! Spectral Galerkin simulator for the radial defocusing wave equation
//! `w_tt - Δw + |w|^α w = 0` on the unit ball of R^3 with Dirichlet data,
//! together with Monte Carlo checks of its Gibbs measure.
//!
//! The state is the complex coefficient vector of `u = w + i (sqrt(-Δ))^{-1} w_t`
//! in the radial eigenbasis `e_n(r) = sqrt(2) sin(pi n r) / r`. The truncated
//! flow is a `2N`-dimensional Hamiltonian system, integrated by Strang
//! splitting of its two exactly solvable parts.
//!
//! Modules:
//! - [`spectral`]: eigenbasis, quadrature, transforms, norms.
//! - [`gibbs`]: Gaussian sampling, Gibbs weights, exponential-moment formulas.
//! - [`dynamics`]: energy, vector field, splitting integrator, Picard solver.
//! - [`verify`]: invariance, tail, convergence, growth and Strichartz experiments.
//! - [`io`]: configuration, CSV/JSON output, experiment orchestration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod gibbs;
pub mod io;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::{RadialQuadrature, SobolevIndex, SpectralState, WaveDataPair};
