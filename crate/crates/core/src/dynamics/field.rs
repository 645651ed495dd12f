//! The Hamiltonian vector field in `(a, b)` coordinates:
//!
//! ```text
//! ȧ_n = z_n b_n
//! ḃ_n = -z_n a_n - z_n^{-1} <|v|^α v, e_n>,   v = sum_m a_m e_m
//! ```

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::basis::frequency;
use crate::spectral::transform::abs_pow;
use crate::spectral::{RadialQuadrature, SpectralState};

/// Per-trajectory scratch buffers for the nonlinear pairing.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    re: Vec<f64>,
    grid: Vec<f64>,
    pub(crate) force: Vec<f64>,
    inv_freq: Vec<f64>,
    kinetic: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(quad: &RadialQuadrature, n_modes: usize) -> Self {
        Self {
            re: vec![0.0; n_modes],
            grid: vec![0.0; quad.len()],
            force: vec![0.0; n_modes],
            inv_freq: (1..=n_modes).map(|n| 1.0 / frequency(n)).collect(),
            kinetic: super::hamiltonian::kinetic_weights(n_modes),
        }
    }

    /// Fills `force[n-1] = <|v|^α v, e_n>` for `v = Re u`.
    pub(crate) fn compute_force(&mut self, coeffs: &[Complex64], alpha: f64, quad: &RadialQuadrature) {
        for (r, c) in self.re.iter_mut().zip(coeffs) {
            *r = c.re;
        }
        quad.synth_real(&self.re, &mut self.grid);
        apply_nonlinearity(&mut self.grid, alpha);
        quad.analyze_real(&self.grid, &mut self.force);
    }

    /// `b_n -= t z_n^{-1} force_n` with the force evaluated at the current `a`.
    pub(crate) fn kick(&mut self, coeffs: &mut [Complex64], t: f64, alpha: f64, quad: &RadialQuadrature) {
        self.compute_force(coeffs, alpha, quad);
        for ((c, f), inv) in coeffs.iter_mut().zip(&self.force).zip(&self.inv_freq) {
            c.im -= t * inv * f;
        }
    }

    pub(crate) fn potential(&mut self, coeffs: &[Complex64], alpha: f64, quad: &RadialQuadrature) -> f64 {
        for (r, c) in self.re.iter_mut().zip(coeffs) {
            *r = c.re;
        }
        quad.synth_real(&self.re, &mut self.grid);
        let p = alpha + 2.0;
        quad.weights()
            .iter()
            .zip(&self.grid)
            .map(|(w, v)| w * abs_pow(v.abs(), p))
            .sum::<f64>()
            / p
    }

    pub(crate) fn hamiltonian(&mut self, state: &SpectralState, alpha: f64, quad: &RadialQuadrature) -> f64 {
        let kinetic = super::hamiltonian::kinetic_with(&self.kinetic, state.coeffs());
        kinetic + self.potential(state.coeffs(), alpha, quad)
    }

    /// The energy conserved by the flow `params` describes: `H`, or its kinetic part for the linear flow.
    pub(crate) fn conserved_energy(&mut self, state: &SpectralState, params: &super::FlowParams) -> f64 {
        if params.nonlinear {
            self.hamiltonian(state, params.alpha, &params.quad)
        } else {
            super::hamiltonian::kinetic_with(&self.kinetic, state.coeffs())
        }
    }
}

/// `v -> |v|^α v` in place.
#[inline]
pub(crate) fn apply_nonlinearity(values: &mut [f64], alpha: f64) {
    if alpha == 1.0 {
        for v in values.iter_mut() {
            *v *= v.abs();
        }
    } else if alpha == 2.0 {
        for v in values.iter_mut() {
            *v = *v * *v * *v;
        }
    } else {
        for v in values.iter_mut() {
            if *v != 0.0 {
                *v *= v.abs().powf(alpha);
            }
        }
    }
}

/// The tangent `(ȧ_n, ḃ_n)`, packed as a state with `re = ȧ`, `im = ḃ`.
pub fn vector_field(state: &SpectralState, alpha: f64, quad: &RadialQuadrature) -> Result<SpectralState> {
    quad.check_capacity(state.n_modes())?;
    let mut ws = Workspace::new(quad, state.n_modes());
    ws.compute_force(state.coeffs(), alpha, quad);
    let coeffs = state
        .coeffs()
        .iter()
        .zip(&ws.force)
        .enumerate()
        .map(|(i, (c, f))| {
            let z = frequency(i + 1);
            Complex64::new(z * c.im, -z * c.re - f / z)
        })
        .collect();
    Ok(SpectralState::from_vec_unchecked(coeffs))
}

/// Central differences of the field at `state`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceProbe {
    /// `sum_n ∂ȧ_n/∂a_n + ∂ḃ_n/∂b_n`.
    pub divergence: f64,
    /// `∂ȧ_n/∂a_n` per mode.
    pub da_da: Vec<f64>,
    /// `∂ḃ_n/∂b_n` per mode.
    pub db_db: Vec<f64>,
    /// Largest component of the field, for relative tolerances.
    pub field_scale: f64,
}

impl DivergenceProbe {
    pub fn max_partial(&self) -> f64 {
        self.da_da.iter().chain(&self.db_db).fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn relative(&self) -> f64 {
        self.divergence.abs() / self.field_scale.max(f64::MIN_POSITIVE)
    }
}

pub fn divergence_probe(state: &SpectralState, alpha: f64, quad: &RadialQuadrature, h: f64) -> Result<DivergenceProbe> {
    if !(h > 0.0) {
        return Err(crate::Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let base = vector_field(state, alpha, quad)?;
    let field_scale = base
        .coeffs()
        .iter()
        .fold(0.0f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));
    let n = state.n_modes();
    let mut da_da = Vec::with_capacity(n);
    let mut db_db = Vec::with_capacity(n);
    for k in 0..n {
        let shifted = |delta: Complex64| {
            let mut s = state.clone();
            s.coeffs_mut()[k] += delta;
            vector_field(&s, alpha, quad)
        };
        let ap = shifted(Complex64::new(h, 0.0))?;
        let am = shifted(Complex64::new(-h, 0.0))?;
        da_da.push((ap.coeffs()[k].re - am.coeffs()[k].re) / (2.0 * h));
        let bp = shifted(Complex64::new(0.0, h))?;
        let bm = shifted(Complex64::new(0.0, -h))?;
        db_db.push((bp.coeffs()[k].im - bm.coeffs()[k].im) / (2.0 * h));
    }
    let divergence = da_da.iter().sum::<f64>() + db_db.iter().sum::<f64>();
    Ok(DivergenceProbe {
        divergence,
        da_da,
        db_db,
        field_scale,
    })
}
