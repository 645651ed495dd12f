//! Gaussian tail and exponential-moment checks against the closed-form product.

use serde::Serialize;

use super::stats::mean_se_normalized;
use crate::error::{Error, Result};
use crate::gibbs::{exp_moment_product, tail_probability_bound, MomentSign, TailParameter, WeightedEnsemble};
use crate::io::format::Table;
use crate::spectral::state::sobolev_norm_sq;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub lambda: f64,
    pub survival: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub s: f64,
    pub c: f64,
    /// `C_s = E_{μ_N}[exp(c ||u||^2_{H^s})]`.
    pub c_s: f64,
    pub rows: Vec<TailRow>,
    /// Least-squares slope of `ln S(Λ)` against `Λ^2`; `None` with fewer than two usable points.
    pub slope: Option<f64>,
    pub n_samples: usize,
}

impl TailReport {
    pub fn dominated(&self) -> bool {
        self.rows.iter().all(|r| r.survival <= r.bound)
    }

    pub fn monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].lambda < w[0].lambda || w[1].survival <= w[0].survival)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["lambda", "survival", "bound"]);
        for r in &self.rows {
            t.push_floats(&[r.lambda, r.survival, r.bound]);
        }
        t
    }
}

/// Weighted survival `ρ_N(||u||_{H^s} > Λ)` on `lambda_grid`, next to the
/// bound `C_s exp(-cΛ^2)` with `C_s` the exact exponential moment at `(c, s)`.
pub fn tail_check(ensemble: &WeightedEnsemble, t: &TailParameter, lambda_grid: &[f64]) -> Result<TailReport> {
    if ensemble.is_empty() {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    let c_s = exp_moment_product(ensemble.n_modes, t, MomentSign::Plus)?;
    let w = ensemble.normalized_weights();
    let norms: Vec<f64> = ensemble
        .samples
        .iter()
        .map(|u| sobolev_norm_sq(u, t.s()).sqrt())
        .collect();
    let mut rows = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let survival: f64 = norms
            .iter()
            .zip(&w)
            .filter(|(n, _)| **n > lambda)
            .fold(0.0, |acc, (_, w)| acc + w)
            .min(1.0);
        let bound = if lambda > 0.0 {
            tail_probability_bound(lambda, t.c(), c_s)?
        } else {
            c_s
        };
        rows.push(TailRow {
            lambda,
            survival,
            bound,
        });
    }
    let slope = fit_log_slope(&rows);
    Ok(TailReport {
        s: t.s(),
        c: t.c(),
        c_s,
        rows,
        slope,
        n_samples: ensemble.len(),
    })
}

fn fit_log_slope(rows: &[TailRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.survival > 0.0)
        .map(|r| (r.lambda * r.lambda, r.survival.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub n_modes: usize,
    pub s: f64,
    pub c: f64,
    pub estimate: f64,
    pub standard_error: f64,
    pub exact: f64,
    pub pass: bool,
}

/// Unweighted Monte Carlo estimate of `E_{μ_N}[exp(c ||u||^2_{H^s})]` against the product formula.
pub fn exp_moment_check(ensemble: &WeightedEnsemble, t: &TailParameter, se_factor: f64) -> Result<MomentCheck> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let exact = exp_moment_product(ensemble.n_modes, t, MomentSign::Plus)?;
    let values: Vec<f64> = ensemble
        .samples
        .iter()
        .map(|u| (t.c() * sobolev_norm_sq(u, t.s())).exp())
        .collect();
    let w = vec![1.0 / values.len() as f64; values.len()];
    let (estimate, standard_error) = mean_se_normalized(&values, &w);
    Ok(MomentCheck {
        n_modes: ensemble.n_modes,
        s: t.s(),
        c: t.c(),
        estimate,
        standard_error,
        exact,
        pass: (estimate - exact).abs() <= se_factor * standard_error,
    })
}
