//! Finite-N check that the flow leaves `rho_N` invariant: evolve every sample,
//! keep its weight, and compare weighted distributions at `t = 0` and `t = T`.

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{bootstrap_ks_threshold, mean_se_normalized, weighted_ks};
use crate::dynamics::field::Workspace;
use crate::dynamics::flow;
use crate::dynamics::FlowParams;
use crate::error::{Error, Result};
use crate::gibbs::WeightedEnsemble;
use crate::spectral::state::sobolev_norm_sq;
use crate::spectral::SpectralState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// `||u||_{H^s}`.
    Sobolev(f64),
    /// `||u||_{L^2}^2`.
    L2Squared,
    /// `||Re u||_{L^{α+2}}^{α+2}`.
    RealPotential,
    ReCoeff(usize),
    ImCoeff(usize),
    /// `|c_k|^2`.
    ModeEnergy(usize),
    /// `H`.
    Energy,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Self::Sobolev(s) => format!("hs_{s}"),
            Self::L2Squared => "l2_sq".into(),
            Self::RealPotential => "re_potential".into(),
            Self::ReCoeff(k) => format!("re_c{k}"),
            Self::ImCoeff(k) => format!("im_c{k}"),
            Self::ModeEnergy(k) => format!("abs2_c{k}"),
            Self::Energy => "energy".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown observable `{s}`"));
        let index = |rest: &str| rest.parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(bad);
        match s {
            "l2_sq" => Ok(Self::L2Squared),
            "re_potential" => Ok(Self::RealPotential),
            "energy" => Ok(Self::Energy),
            _ => {
                if let Some(rest) = s.strip_prefix("hs_") {
                    rest.parse().map(Self::Sobolev).map_err(|_| bad())
                } else if let Some(rest) = s.strip_prefix("re_c") {
                    index(rest).map(Self::ReCoeff)
                } else if let Some(rest) = s.strip_prefix("im_c") {
                    index(rest).map(Self::ImCoeff)
                } else if let Some(rest) = s.strip_prefix("abs2_c") {
                    index(rest).map(Self::ModeEnergy)
                } else {
                    Err(bad())
                }
            }
        }
    }

    /// The five observables of the standard invariance run.
    pub fn standard_set() -> Vec<Self> {
        vec![
            Self::L2Squared,
            Self::RealPotential,
            Self::Sobolev(0.25),
            Self::ReCoeff(1),
            Self::ModeEnergy(2),
        ]
    }

    pub(crate) fn eval(&self, state: &SpectralState, ws: &mut Workspace, params: &FlowParams) -> f64 {
        let c = |k: usize| state.coeff(k).unwrap_or_default();
        match *self {
            Self::Sobolev(s) => sobolev_norm_sq(state, s).sqrt(),
            Self::L2Squared => sobolev_norm_sq(state, 0.0),
            Self::RealPotential => ws.potential(state.coeffs(), params.alpha, &params.quad) * (params.alpha + 2.0),
            Self::ReCoeff(k) => c(k).re,
            Self::ImCoeff(k) => c(k).im,
            Self::ModeEnergy(k) => c(k).norm_sqr(),
            Self::Energy => ws.hamiltonian(state, params.alpha, &params.quad),
        }
    }
}

/// Evaluates `observables` on every state; result is indexed `[observable][sample]`.
pub fn evaluate_observables(
    states: &[SpectralState],
    observables: &[Observable],
    params: &FlowParams,
) -> Vec<Vec<f64>> {
    let per_sample: Vec<Vec<f64>> = states
        .par_iter()
        .map_init(
            || Workspace::new(&params.quad, params.n_modes),
            |ws, s| observables.iter().map(|o| o.eval(s, ws, params)).collect(),
        )
        .collect();
    (0..observables.len())
        .map(|k| per_sample.iter().map(|row| row[k]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceOptions {
    pub bootstrap_resamples: usize,
    pub ks_level: f64,
    pub se_factor: f64,
    pub bootstrap_seed: u64,
}

impl Default for InvarianceOptions {
    fn default() -> Self {
        Self {
            bootstrap_resamples: 200,
            ks_level: 0.99,
            se_factor: 3.0,
            bootstrap_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableComparison {
    pub name: String,
    pub mean_initial: f64,
    pub se_initial: f64,
    pub mean_final: f64,
    pub se_final: f64,
    pub mean_diff: f64,
    pub combined_se: f64,
    pub mean_pass: bool,
    pub ks: f64,
    pub ks_threshold: f64,
    pub ks_pass: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub comparisons: Vec<ObservableComparison>,
    pub n_samples: usize,
    pub effective_sample_size: f64,
    pub n_modes: usize,
    pub alpha: f64,
    pub master_seed: u64,
    pub horizon: f64,
    pub dt: f64,
    pub nonlinear: bool,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }
}

/// Evolves every sample by `Phi_N(horizon)` and compares weighted observable
/// distributions before and after. Weights are not recomputed.
pub fn invariance_test(
    ensemble: &WeightedEnsemble,
    horizon: f64,
    params: &FlowParams,
    observables: &[Observable],
    opts: &InvarianceOptions,
) -> Result<InvarianceReport> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidArgument(
            "invariance test needs at least two samples".into(),
        ));
    }
    if ensemble.n_modes != params.n_modes {
        return Err(Error::LengthMismatch {
            expected: params.n_modes,
            actual: ensemble.n_modes,
        });
    }
    let evolved: Vec<SpectralState> = ensemble
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            flow(s, params, horizon).map_err(|e| Error::Sample {
                index: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let initial = evaluate_observables(&ensemble.samples, observables, params);
    let last = evaluate_observables(&evolved, observables, params);
    let w = ensemble.normalized_weights();

    let comparisons = observables
        .iter()
        .enumerate()
        .map(|(k, obs)| {
            let (m0, se0) = mean_se_normalized(&initial[k], &w);
            let (m1, se1) = mean_se_normalized(&last[k], &w);
            let diff = m1 - m0;
            let combined = (se0 * se0 + se1 * se1).sqrt();
            let mean_pass = diff.abs() <= opts.se_factor * combined;
            let ks = weighted_ks(&initial[k], &w, &last[k], &w);
            let ks_threshold = bootstrap_ks_threshold(
                &initial[k],
                &w,
                &last[k],
                &w,
                opts.bootstrap_resamples,
                opts.ks_level,
                opts.bootstrap_seed.wrapping_add(k as u64),
            );
            let ks_pass = ks <= ks_threshold;
            ObservableComparison {
                name: obs.name(),
                mean_initial: m0,
                se_initial: se0,
                mean_final: m1,
                se_final: se1,
                mean_diff: diff,
                combined_se: combined,
                mean_pass,
                ks,
                ks_threshold,
                ks_pass,
                pass: mean_pass && ks_pass,
            }
        })
        .collect();
    Ok(InvarianceReport {
        comparisons,
        n_samples: ensemble.len(),
        effective_sample_size: ensemble.effective_sample_size(),
        n_modes: params.n_modes,
        alpha: params.alpha,
        master_seed: ensemble.master_seed,
        horizon,
        dt: params.dt,
        nonlinear: params.nonlinear,
    })
}
