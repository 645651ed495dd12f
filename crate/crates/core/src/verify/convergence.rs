//! Galerkin truncations `Φ_N(t) S_N u0` against the reference flow `Φ_{N_ref}(t) u0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{flow, FlowParams};
use crate::error::{Error, Result};
use crate::io::format::Table;
use crate::spectral::state::sobolev_norm_sq;
use crate::spectral::{project, SpectralState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_modes: usize,
    /// `max` over the shared time grid of the `H^σ` discrepancy.
    pub sup_discrepancy: f64,
    /// `||(1 - S_N) u0||_{H^σ}`.
    pub initial_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub reference_modes: usize,
    pub sigma: f64,
    pub horizon: f64,
    pub times: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Each discrepancy is at most `slack` times the previous one.
    pub fn nonincreasing_within(&self, slack: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].sup_discrepancy <= slack * w[0].sup_discrepancy)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["n_modes", "sup_discrepancy", "initial_discrepancy"]);
        for r in &self.rows {
            t.push(vec![
                r.n_modes.to_string(),
                crate::io::format::fmt_f64(r.sup_discrepancy),
                crate::io::format::fmt_f64(r.initial_discrepancy),
            ]);
        }
        t
    }
}

/// Runs the reference and every truncation on `checkpoints + 1` equally spaced
/// times in `[0, horizon]`. `params` supplies `α`, `dt`, the scheme and the
/// quadrature, which must resolve `N_ref` modes.
pub fn convergence_experiment(
    u0_big: &SpectralState,
    n_list: &[usize],
    horizon: f64,
    params: &FlowParams,
    sigma: f64,
    checkpoints: usize,
) -> Result<ConvergenceReport> {
    let n_ref = u0_big.n_modes();
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("N list must be non-empty and increasing".into()));
    }
    if n_list.iter().any(|&n| n == 0 || n >= n_ref) {
        return Err(Error::InvalidArgument(format!("every N must lie in 1..{n_ref}")));
    }
    if checkpoints == 0 {
        return Err(Error::InvalidArgument("need at least one checkpoint".into()));
    }
    let ref_params = FlowParams {
        n_modes: n_ref,
        ..params.clone()
    };
    ref_params.check_state(u0_big)?;
    let times: Vec<f64> = (0..=checkpoints)
        .map(|k| horizon * k as f64 / checkpoints as f64)
        .collect();
    let run = |u0: SpectralState, p: FlowParams| -> Result<Vec<SpectralState>> {
        let mut out = Vec::with_capacity(times.len());
        out.push(u0);
        for w in times.windows(2) {
            let next = flow(out.last().expect("non-empty"), &p, w[1] - w[0])?;
            out.push(next);
        }
        Ok(out)
    };
    let reference = run(u0_big.clone(), ref_params)?;
    let rows = n_list
        .par_iter()
        .map(|&n| {
            let p = FlowParams {
                n_modes: n,
                ..params.clone()
            };
            let truncated = run(u0_big.resized(n), p)?;
            let sup = truncated
                .iter()
                .zip(&reference)
                .map(|(a, b)| sobolev_norm_sq(&a.resized(n_ref).sub(b).expect("equal lengths"), sigma).sqrt())
                .fold(0.0, f64::max);
            Ok(ConvergenceRow {
                n_modes: n,
                sup_discrepancy: sup,
                initial_discrepancy: sobolev_norm_sq(&u0_big.sub(&project(u0_big, n))?, sigma).sqrt(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        reference_modes: n_ref,
        sigma,
        horizon,
        times,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::sample_gaussian;
    use crate::spectral::RadialQuadrature;
    use std::sync::Arc;

    fn params(n_ref: usize) -> FlowParams {
        let quad = Arc::new(RadialQuadrature::for_modes(n_ref).unwrap());
        FlowParams::new(1.0, n_ref, 1e-3, quad).unwrap()
    }

    #[test]
    fn zero_horizon_gives_projection_error() {
        let u0 = sample_gaussian(32, 2, 0);
        let rep = convergence_experiment(&u0, &[4, 8, 16], 0.0, &params(32), 0.25, 1).unwrap();
        for r in &rep.rows {
            assert_eq!(r.sup_discrepancy, r.initial_discrepancy);
        }
        assert!(rep.nonincreasing_within(1.0));
    }

    #[test]
    fn linear_flow_keeps_low_modes_exact() {
        let u0 = sample_gaussian(32, 2, 0).resized(4).resized(32);
        let p = params(32).linear_only();
        let rep = convergence_experiment(&u0, &[4, 8, 16], 0.5, &p, 0.25, 5).unwrap();
        for r in &rep.rows {
            assert!(r.sup_discrepancy <= 1e-13, "{r:?}");
        }
    }

    #[test]
    fn truncations_approach_the_reference() {
        let u0 = sample_gaussian(32, 9, 0);
        let rep = convergence_experiment(&u0, &[4, 8, 16], 0.5, &params(32), 0.25, 10).unwrap();
        assert!(rep.nonincreasing_within(1.5), "{:?}", rep.rows);
        assert!(rep.rows[2].sup_discrepancy < rep.rows[0].sup_discrepancy);
    }

    #[test]
    fn rejects_bad_lists() {
        let u0 = sample_gaussian(16, 2, 0);
        let p = params(16);
        assert!(convergence_experiment(&u0, &[8, 4], 1.0, &p, 0.25, 2).is_err());
        assert!(convergence_experiment(&u0, &[16], 1.0, &p, 0.25, 2).is_err());
        assert!(convergence_experiment(&u0, &[], 1.0, &p, 0.25, 2).is_err());
    }
}
