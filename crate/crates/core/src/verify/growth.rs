//! Long-time behaviour of `||u(t)||_{H^σ}` over a weighted ensemble.

use rayon::prelude::*;
use serde::Serialize;

use super::stats::weighted_quantile;
use crate::dynamics::field::Workspace;
use crate::dynamics::{flow, FlowParams};
use crate::error::{Error, Result};
use crate::gibbs::WeightedEnsemble;
use crate::io::format::{fmt_f64, Table};
use crate::spectral::state::sobolev_norm_sq;

/// Relative energy drift beyond which a long run is aborted.
pub const DRIFT_GUARD: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthOptions {
    pub sigma: f64,
    pub quantiles: Vec<f64>,
    /// Offset in the envelope `(i0 + log(1 + |t|))^{1/2}`.
    pub i0: f64,
    pub drift_guard: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            sigma: 0.25,
            quantiles: vec![0.1, 0.5, 0.9],
            i0: 1.0,
            drift_guard: DRIFT_GUARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub times: Vec<f64>,
    pub quantile_levels: Vec<f64>,
    /// `quantiles[k][j]`: level `k` at time `j`.
    pub quantiles: Vec<Vec<f64>>,
    /// Weighted median normalized by the envelope.
    pub normalized_median: Vec<f64>,
    pub i0: f64,
    pub sigma: f64,
    pub max_energy_drift: f64,
}

impl GrowthReport {
    pub fn envelope(i0: f64, t: f64) -> f64 {
        (i0 + (1.0 + t.abs()).ln()).sqrt()
    }

    /// `max q / min q` of the normalized median over checkpoints.
    pub fn envelope_ratio(&self) -> f64 {
        let max = self.normalized_median.iter().copied().fold(f64::MIN, f64::max);
        let min = self.normalized_median.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }

    pub fn to_table(&self) -> Table {
        let mut header = vec!["time".to_string()];
        header.extend(self.quantile_levels.iter().map(|q| format!("q{q}")));
        header.push("normalized_median".into());
        let mut t = Table::new(header);
        for (j, &time) in self.times.iter().enumerate() {
            let mut row = vec![fmt_f64(time)];
            row.extend(self.quantiles.iter().map(|q| fmt_f64(q[j])));
            row.push(fmt_f64(self.normalized_median[j]));
            t.push(row);
        }
        t
    }
}

/// Evolves every sample through `checkpoints` (increasing, starting at or after 0)
/// and records weighted quantiles of `||u(t)||_{H^σ}`.
pub fn growth_experiment(
    ensemble: &WeightedEnsemble,
    checkpoints: &[f64],
    params: &FlowParams,
    opts: &GrowthOptions,
) -> Result<GrowthReport> {
    if ensemble.is_empty() {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    if checkpoints.is_empty() || checkpoints[0] < 0.0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "checkpoints must be increasing and nonnegative".into(),
        ));
    }
    if checkpoints.last().is_some_and(|&t| t > 1e3) {
        return Err(Error::InvalidArgument("horizon beyond 1e3".into()));
    }
    // per_sample[i] = (norms at checkpoints, max drift)
    let per_sample: Vec<(Vec<f64>, f64)> = ensemble
        .samples
        .par_iter()
        .enumerate()
        .map_init(
            || Workspace::new(&params.quad, params.n_modes),
            |ws, (i, u0)| {
                let h0 = ws.conserved_energy(u0, params);
                let mut u = u0.clone();
                let mut now = 0.0;
                let mut norms = Vec::with_capacity(checkpoints.len());
                let mut drift: f64 = 0.0;
                for &t in checkpoints {
                    if t > now {
                        u = flow(&u, params, t - now).map_err(|e| Error::Sample {
                            index: i,
                            source: Box::new(e),
                        })?;
                        now = t;
                    }
                    let h = ws.conserved_energy(&u, params);
                    let d = if h0 > 0.0 { (h - h0).abs() / h0 } else { (h - h0).abs() };
                    drift = drift.max(d);
                    if d > opts.drift_guard {
                        return Err(Error::EnergyDrift {
                            drift: d,
                            limit: opts.drift_guard,
                        });
                    }
                    norms.push(sobolev_norm_sq(&u, opts.sigma).sqrt());
                }
                Ok((norms, drift))
            },
        )
        .collect::<Result<_>>()?;
    let w = ensemble.normalized_weights();
    let level = |q: f64| -> Vec<f64> {
        (0..checkpoints.len())
            .map(|j| {
                let vals: Vec<f64> = per_sample.iter().map(|s| s.0[j]).collect();
                weighted_quantile(&vals, &w, q)
            })
            .collect()
    };
    let quantiles: Vec<Vec<f64>> = opts.quantiles.iter().map(|&q| level(q)).collect();
    let median = level(0.5);
    let normalized_median = checkpoints
        .iter()
        .zip(&median)
        .map(|(&t, m)| m / GrowthReport::envelope(opts.i0, t))
        .collect();
    Ok(GrowthReport {
        times: checkpoints.to_vec(),
        quantile_levels: opts.quantiles.clone(),
        quantiles,
        normalized_median,
        i0: opts.i0,
        sigma: opts.sigma,
        max_energy_drift: per_sample.iter().map(|s| s.1).fold(0.0, f64::max),
    })
}

/// `0, then roughly geometric` checkpoints up to `horizon`, all multiples of `dt`.
pub fn default_checkpoints(horizon: f64, dt: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut t = dt.max(horizon / 1000.0);
    while t < horizon {
        let snapped = (t / dt).round() * dt;
        if snapped > *out.last().expect("non-empty") {
            out.push(snapped);
        }
        t *= 2.0;
    }
    if horizon > 0.0 {
        out.push(horizon);
    }
    out
}
