use num_complex::Complex64;

use super::field::Workspace;
use crate::error::Result;
use crate::spectral::basis::frequency;
use crate::spectral::state::sobolev_norm_sq;
use crate::spectral::transform::{power_integral, synthesize};
use crate::spectral::{sqrt_laplacian_pow, RadialQuadrature, SpectralState};

/// `H = ½ sum z_n^2 (a_n^2 + b_n^2) + (1/(α+2)) ||Re u||_{L^{α+2}}^{α+2}`.
pub fn hamiltonian(state: &SpectralState, alpha: f64, quad: &RadialQuadrature) -> Result<f64> {
    quad.check_capacity(state.n_modes())?;
    let mut ws = Workspace::new(quad, state.n_modes());
    Ok(ws.hamiltonian(state, alpha, quad))
}

/// Kinetic part `½ ||sqrt(-Δ) u||^2_{L^2}` in coefficient form.
pub fn kinetic_energy(state: &SpectralState) -> f64 {
    0.5 * sobolev_norm_sq(state, 1.0)
}

/// The same energy evaluated from grid values of `sqrt(-Δ) u` and `Re u`.
pub fn hamiltonian_complex_form(state: &SpectralState, alpha: f64, quad: &RadialQuadrature) -> Result<f64> {
    let grad = synthesize(&sqrt_laplacian_pow(state, 1.0), quad)?;
    let kinetic = 0.5 * power_integral(grad.iter().map(|z| z.norm()), 2.0, quad);
    let re = synthesize(state, quad)?;
    let p = alpha + 2.0;
    let potential = power_integral(re.iter().map(|z| z.re.abs()), p, quad) / p;
    Ok(kinetic + potential)
}

/// Per-mode kinetic weights `z_n^2`.
pub(crate) fn kinetic_weights(n_modes: usize) -> Vec<f64> {
    (1..=n_modes).map(|n| frequency(n).powi(2)).collect()
}

pub(crate) fn kinetic_with(weights: &[f64], coeffs: &[Complex64]) -> f64 {
    0.5 * weights.iter().zip(coeffs).map(|(w, c)| w * c.norm_sqr()).sum::<f64>()
}
