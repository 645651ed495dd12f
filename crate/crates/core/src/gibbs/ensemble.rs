use num_complex::Complex64;
use rayon::prelude::*;

use super::rng::KeyedStream;
use crate::error::{Error, Result};
use crate::io::format::{fmt_f64, parse_f64, Table};
use crate::spectral::basis::frequency;
use crate::spectral::transform::real_power_integral;
use crate::spectral::{RadialQuadrature, SpectralState};

/// Draw `index` of `mu_N`: `c_n = (h_n + i l_n) / z_n` with `(h_n, l_n)` the
/// `n`-th normal pair of the stream keyed by `(seed, index)`.
pub fn sample_gaussian(n_modes: usize, seed: u64, index: u64) -> SpectralState {
    assert!(n_modes >= 1, "n_modes must be >= 1");
    let mut stream = KeyedStream::new(seed, index);
    let coeffs = (1..=n_modes)
        .map(|n| {
            let (h, l) = stream.normal_pair();
            Complex64::new(h, l) / frequency(n)
        })
        .collect();
    SpectralState::from_vec_unchecked(coeffs)
}

/// `-(1/(α+2)) ||Re u||_{L^{α+2}}^{α+2}`, the log density of `rho_N` against `mu_N`.
pub fn gibbs_log_weight(state: &SpectralState, alpha: f64, quad: &RadialQuadrature) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let p = alpha + 2.0;
    Ok(-real_power_integral(state, p, quad)? / p)
}

/// Samples of `mu_N` with their Gibbs log-weights; weighted means estimate `rho_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEnsemble {
    pub samples: Vec<SpectralState>,
    pub log_weights: Vec<f64>,
    pub master_seed: u64,
    pub alpha: f64,
    pub n_modes: usize,
}

impl WeightedEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The same draws with every log-weight zero, i.e. the plain `mu_N` ensemble.
    pub fn unweighted(&self) -> Self {
        Self {
            log_weights: vec![0.0; self.len()],
            ..self.clone()
        }
    }

    /// Weights normalized to sum 1, exponentiated after subtracting the max log-weight.
    pub fn normalized_weights(&self) -> Vec<f64> {
        normalize_log_weights(&self.log_weights)
    }

    /// `(sum w)^2 / sum w^2`.
    pub fn effective_sample_size(&self) -> f64 {
        let w = self.normalized_weights();
        1.0 / w.iter().map(|x| x * x).sum::<f64>()
    }

    /// One row per sample: `index,n_modes,alpha,seed,log_weight,re_1,im_1,...,re_N,im_N`.
    pub fn to_table(&self) -> Table {
        let mut header: Vec<String> = ["index", "n_modes", "alpha", "seed", "log_weight"]
            .into_iter()
            .map(String::from)
            .collect();
        for n in 1..=self.n_modes {
            header.push(format!("re_{n}"));
            header.push(format!("im_{n}"));
        }
        let mut table = Table::new(header);
        for (i, (s, lw)) in self.samples.iter().zip(&self.log_weights).enumerate() {
            let mut row = vec![
                i.to_string(),
                self.n_modes.to_string(),
                fmt_f64(self.alpha),
                self.master_seed.to_string(),
                fmt_f64(*lw),
            ];
            for c in s.coeffs() {
                row.push(fmt_f64(c.re));
                row.push(fmt_f64(c.im));
            }
            table.push(row);
        }
        table
    }

    pub fn from_table(table: &Table) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidArgument(format!("ensemble table: {reason}"));
        let first = table.rows.first().ok_or_else(|| bad("no rows"))?;
        let n_modes: usize = first[1].parse().map_err(|_| bad("n_modes"))?;
        if table.header.len() != 5 + 2 * n_modes {
            return Err(bad("column count does not match n_modes"));
        }
        let alpha = parse_f64(&first[2])?;
        let master_seed: u64 = first[3].parse().map_err(|_| bad("seed"))?;
        let mut samples = Vec::with_capacity(table.rows.len());
        let mut log_weights = Vec::with_capacity(table.rows.len());
        for (i, row) in table.rows.iter().enumerate() {
            if row[0] != i.to_string() {
                return Err(bad("indices must be 0, 1, 2, ..."));
            }
            log_weights.push(parse_f64(&row[4])?);
            let vals = row[5..].iter().map(|s| parse_f64(s)).collect::<Result<Vec<f64>>>()?;
            let coeffs = vals.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
            samples.push(SpectralState::new(coeffs)?);
        }
        Ok(Self {
            samples,
            log_weights,
            master_seed,
            alpha,
            n_modes,
        })
    }
}

pub(crate) fn normalize_log_weights(log_weights: &[f64]) -> Vec<f64> {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = log_weights.iter().map(|lw| (lw - max).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Draws `n_samples` states from `mu_N` and attaches their Gibbs log-weights.
///
/// Sample `i` uses stream `(seed, i)`; parallel evaluation returns results in index order.
pub fn sample_ensemble(
    n_modes: usize,
    n_samples: usize,
    alpha: f64,
    seed: u64,
    quad: &RadialQuadrature,
) -> Result<WeightedEnsemble> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be >= 1".into()));
    }
    if n_modes == 0 {
        return Err(Error::InvalidArgument("n_modes must be >= 1".into()));
    }
    quad.check_capacity(n_modes)?;
    let pairs = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_gaussian(n_modes, seed, i as u64);
            let lw = gibbs_log_weight(&s, alpha, quad)?;
            Ok((s, lw))
        })
        .collect::<Result<Vec<_>>>()?;
    let (samples, log_weights) = pairs.into_iter().unzip();
    Ok(WeightedEnsemble {
        samples,
        log_weights,
        master_seed: seed,
        alpha,
        n_modes,
    })
}
