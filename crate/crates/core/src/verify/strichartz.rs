//! Empirical ratio `||e^{-it sqrt(-Δ)} f||_{L^p_t L^q_x} / ||f||_{H^{2/p}}` for
//! random data, with `1/p + 1/q = 1/2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::splitting::free_phase;
use crate::error::{Error, Result};
use crate::gibbs::sample_gaussian;
use crate::io::format::{fmt_f64, Table};
use crate::spectral::quadrature::RadialQuadrature;
use crate::spectral::state::sobolev_norm_sq;
use crate::spectral::transform::power_integral;
use crate::spectral::SpectralState;

pub const DEFAULT_TIME_MESH: usize = 401;

/// `q` with `1/p + 1/q = 1/2`.
pub fn admissible_q(p: f64) -> Result<f64> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "p = {p} is not admissible, need 2 < p < inf"
        )));
    }
    Ok(2.0 * p / (p - 2.0))
}

/// Ratio for one datum, with Simpson in time over `time_mesh` points on `[-T, T]`.
pub fn strichartz_ratio(
    f: &SpectralState,
    p: f64,
    horizon: f64,
    quad: &RadialQuadrature,
    time_mesh: usize,
) -> Result<f64> {
    let q = admissible_q(p)?;
    if !(horizon > 0.0 && horizon <= 1.0) {
        return Err(Error::InvalidArgument(format!("T = {horizon} outside (0, 1]")));
    }
    if time_mesh < 3 || time_mesh.is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "time mesh needs an odd number (>= 3) of points".into(),
        ));
    }
    let n = f.n_modes();
    quad.check_capacity(n)?;
    let denom = sobolev_norm_sq(f, 2.0 / p).sqrt();
    if denom == 0.0 {
        return Err(Error::InvalidArgument("zero datum".into()));
    }
    let h = 2.0 * horizon / (time_mesh - 1) as f64;
    let mut coeffs = vec![num_complex::Complex64::default(); n];
    let mut total = 0.0;
    for i in 0..time_mesh {
        let t = -horizon + i as f64 * h;
        for (k, (out, c)) in coeffs.iter_mut().zip(f.coeffs()).enumerate() {
            *out = c * free_phase(k + 1, t);
        }
        let grid = quad.synth_complex(&coeffs);
        let lq = power_integral(grid.iter().map(|z| z.norm()), q, quad).powf(1.0 / q);
        let w = if i == 0 || i == time_mesh - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        total += w * lq.powf(p);
    }
    Ok((total * h / 3.0).powf(1.0 / p) / denom)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrichartzReport {
    pub n_modes: usize,
    pub p: f64,
    pub q: f64,
    pub horizon: f64,
    pub seed: u64,
    pub ratios: Vec<f64>,
    /// Running maximum of `ratios`.
    pub running_sup: Vec<f64>,
}

impl StrichartzReport {
    pub fn sup(&self) -> f64 {
        self.running_sup.last().copied().unwrap_or(0.0)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["sample", "ratio", "running_sup"]);
        for (i, (r, s)) in self.ratios.iter().zip(&self.running_sup).enumerate() {
            t.push(vec![i.to_string(), fmt_f64(*r), fmt_f64(*s)]);
        }
        t
    }
}

/// Ratios for `n_samples` draws from `μ_N` (sample `i` uses stream `(seed, i)`).
pub fn strichartz_probe(
    n_modes: usize,
    p: f64,
    n_samples: usize,
    horizon: f64,
    seed: u64,
    quad: &RadialQuadrature,
    time_mesh: usize,
) -> Result<StrichartzReport> {
    let q = admissible_q(p)?;
    let ratios: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| strichartz_ratio(&sample_gaussian(n_modes, seed, i), p, horizon, quad, time_mesh))
        .collect::<Result<_>>()?;
    let running_sup = ratios
        .iter()
        .scan(0.0f64, |m, &r| {
            *m = m.max(r);
            Some(*m)
        })
        .collect();
    Ok(StrichartzReport {
        n_modes,
        p,
        q,
        horizon,
        seed,
        ratios,
        running_sup,
    })
}
