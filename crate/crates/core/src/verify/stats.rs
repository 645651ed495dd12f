//! Self-normalized weighted estimators and the weighted two-sample KS test.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gibbs::ensemble::normalize_log_weights;
use crate::gibbs::KeyedStream;

/// Self-normalized weighted mean and its delta-method standard error.
///
/// With normalized weights `W_i`, `SE^2 = n/(n-1) sum W_i^2 (x_i - mean)^2`;
/// uniform weights give the ordinary `s / sqrt(n)`.
pub fn weighted_mean_se(values: &[f64], log_weights: &[f64]) -> Result<(f64, f64)> {
    if values.len() != log_weights.len() {
        return Err(Error::LengthMismatch {
            expected: values.len(),
            actual: log_weights.len(),
        });
    }
    if values.len() < 2 {
        return Err(Error::InvalidArgument(
            "a standard error needs at least two samples".into(),
        ));
    }
    let w = normalize_log_weights(log_weights);
    Ok(mean_se_normalized(values, &w))
}

pub(crate) fn mean_se_normalized(values: &[f64], w: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean: f64 = w.iter().zip(values).map(|(w, x)| w * x).sum();
    let var: f64 = w.iter().zip(values).map(|(w, x)| w * w * (x - mean).powi(2)).sum();
    (mean, (var * n / (n - 1.0)).sqrt())
}

/// Smallest value whose cumulative normalized weight reaches `q`.
pub fn weighted_quantile(values: &[f64], weights: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty() && values.len() == weights.len());
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let total: f64 = weights.iter().sum();
    let target = q * total;
    let mut acc = 0.0;
    for &i in &idx {
        acc += weights[i];
        if acc >= target {
            return values[i];
        }
    }
    values[*idx.last().unwrap()]
}

/// `sup_x |F_x(x) - F_y(x)|` for weighted empirical CDFs. Weights need not be normalized.
pub fn weighted_ks(x: &[f64], wx: &[f64], y: &[f64], wy: &[f64]) -> f64 {
    let sorted = |v: &[f64], w: &[f64]| {
        let total: f64 = w.iter().sum();
        let mut pairs: Vec<(f64, f64)> = v.iter().zip(w).map(|(&a, &b)| (a, b / total)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    };
    let a = sorted(x, wx);
    let b = sorted(y, wy);
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut d = 0.0f64;
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) => p.0.min(q.0),
            (Some(p), None) => p.0,
            (None, Some(q)) => q.0,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i].0 == next {
            fa += a[i].1;
            i += 1;
        }
        while j < b.len() && b[j].0 == next {
            fb += b[j].1;
            j += 1;
        }
        d = d.max((fa - fb).abs());
    }
    d
}

/// `level`-quantile of the weighted KS statistic under the pooled null.
///
/// Each replicate draws two groups of sizes `|x|` and `|y|` uniformly with
/// replacement from the pooled `(value, weight)` pairs. Replicate `b` uses the
/// auxiliary stream `(seed, b)`.
pub fn bootstrap_ks_threshold(
    x: &[f64],
    wx: &[f64],
    y: &[f64],
    wy: &[f64],
    resamples: usize,
    level: f64,
    seed: u64,
) -> f64 {
    let pooled_v: Vec<f64> = x.iter().chain(y).copied().collect();
    let total_x: f64 = wx.iter().sum();
    let total_y: f64 = wy.iter().sum();
    // each group's weights normalized to its own sum, as in the observed statistic
    let pooled_w: Vec<f64> = wx
        .iter()
        .map(|w| w / total_x)
        .chain(wy.iter().map(|w| w / total_y))
        .collect();
    let n_pool = pooled_v.len() as u64;
    let mut stats: Vec<f64> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = KeyedStream::auxiliary(seed, b as u64);
            let mut draw = |k: usize| {
                let mut v = Vec::with_capacity(k);
                let mut w = Vec::with_capacity(k);
                for _ in 0..k {
                    let i = rng.below(n_pool) as usize;
                    v.push(pooled_v[i]);
                    w.push(pooled_w[i]);
                }
                (v, w)
            };
            let (av, aw) = draw(x.len());
            let (bv, bw) = draw(y.len());
            weighted_ks(&av, &aw, &bv, &bw)
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let rank = ((level * resamples as f64).ceil() as usize).clamp(1, resamples);
    stats[rank - 1]
}
