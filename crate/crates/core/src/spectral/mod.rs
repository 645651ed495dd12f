//! Radial eigenbasis, quadrature grids, coefficient/grid transforms and norms.

pub mod basis;
pub mod quadrature;
pub mod state;
pub mod transform;

pub use basis::{eigenvalue, eval_basis};
pub use quadrature::{QuadratureKind, RadialQuadrature, OVERSAMPLING};
pub use state::{
    complexify, decomplexify, inner_product, project, sobolev_norm, sqrt_laplacian_pow, SobolevIndex, SpectralState,
    WaveDataPair,
};
pub use transform::{analyze, lebesgue_norm, real_power_integral, synthesize, synthesize_real};
