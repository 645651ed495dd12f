use num_complex::Complex64;

use super::picard::{picard_solve, PicardOptions};
use super::splitting::{FlowParams, Scheme, Stepper};
use crate::error::{Error, Result};
use crate::io::format::{fmt_f64, Table};
use crate::spectral::state::sobolev_norm_sq;
use crate::spectral::SpectralState;

/// Longest stretch of fused steps between finiteness checks.
const CHECK_EVERY: usize = 256;

/// What to record along a trajectory, and how often.
#[derive(Debug, Clone, PartialEq)]
pub struct Observers {
    /// Record every `every` steps; 0 records the endpoints only.
    pub every: usize,
    pub sobolev_indices: Vec<f64>,
    /// 1-based mode indices whose coefficients are recorded.
    pub modes: Vec<usize>,
}

impl Observers {
    pub fn endpoints() -> Self {
        Self {
            every: 0,
            sobolev_indices: Vec::new(),
            modes: Vec::new(),
        }
    }

    pub fn every(every: usize) -> Self {
        Self {
            every,
            ..Self::endpoints()
        }
    }

    pub fn with_sobolev(mut self, indices: &[f64]) -> Self {
        self.sobolev_indices = indices.to_vec();
        self
    }

    pub fn with_modes(mut self, modes: &[usize]) -> Self {
        self.modes = modes.to_vec();
        self
    }
}

/// Observables sampled along one trajectory. Every series has the length of `times`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    /// `(s, ||u(t)||_{H^s})` series in configuration order.
    pub sobolev_norms: Vec<(f64, Vec<f64>)>,
    /// `(n, c_n(t))` series in configuration order.
    pub selected_modes: Vec<(usize, Vec<Complex64>)>,
}

impl TrajectoryRecord {
    fn new(obs: &Observers) -> Self {
        Self {
            times: Vec::new(),
            energies: Vec::new(),
            sobolev_norms: obs.sobolev_indices.iter().map(|&s| (s, Vec::new())).collect(),
            selected_modes: obs.modes.iter().map(|&n| (n, Vec::new())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |H(t) - H(0)| / H(0)`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let Some(&h0) = self.energies.first() else {
            return 0.0;
        };
        let scale = if h0 != 0.0 { h0.abs() } else { 1.0 };
        self.energies.iter().fold(0.0, |m, h| m.max((h - h0).abs() / scale))
    }

    /// Columns `time, energy, hs_<s>..., re_c<n>, im_c<n>...`.
    pub fn to_table(&self) -> Table {
        let mut header = vec!["time".to_string(), "energy".to_string()];
        header.extend(self.sobolev_norms.iter().map(|(s, _)| format!("hs_{s}")));
        for (n, _) in &self.selected_modes {
            header.push(format!("re_c{n}"));
            header.push(format!("im_c{n}"));
        }
        let mut table = Table::new(header);
        for i in 0..self.len() {
            let mut row = vec![fmt_f64(self.times[i]), fmt_f64(self.energies[i])];
            row.extend(self.sobolev_norms.iter().map(|(_, v)| fmt_f64(v[i])));
            for (_, v) in &self.selected_modes {
                row.push(fmt_f64(v[i].re));
                row.push(fmt_f64(v[i].im));
            }
            table.push(row);
        }
        table
    }

    fn push(&mut self, t: f64, state: &SpectralState, energy: f64) {
        self.times.push(t);
        self.energies.push(energy);
        for (s, series) in &mut self.sobolev_norms {
            series.push(sobolev_norm_sq(state, *s).sqrt());
        }
        for (n, series) in &mut self.selected_modes {
            series.push(state.coeff(*n).unwrap_or_default());
        }
    }
}

/// Splits `|horizon|` into whole steps of `dt` plus a remainder.
pub(crate) fn step_plan(horizon: f64, dt: f64) -> (usize, f64) {
    let ratio = horizon.abs() / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        (nearest as usize, 0.0)
    } else {
        let whole = ratio.floor();
        (whole as usize, horizon.abs() - whole * dt)
    }
}

/// Approximates `Phi_N(horizon)(state)`, recording observables on the way.
///
/// Negative horizons run the flow backwards. A final shortened step lands
/// exactly on `horizon`.
pub fn evolve(
    state: &SpectralState,
    params: &FlowParams,
    horizon: f64,
    observers: &Observers,
) -> Result<(SpectralState, TrajectoryRecord)> {
    params.check_state(state)?;
    if !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!("horizon must be finite, got {horizon}")));
    }
    if observers.modes.iter().any(|&n| n == 0 || n > params.n_modes) {
        return Err(Error::InvalidArgument(format!(
            "observed modes {:?} must lie in 1..={}",
            observers.modes, params.n_modes
        )));
    }
    let sign = if horizon < 0.0 { -1.0 } else { 1.0 };
    let dt = sign * params.dt;
    let (n_steps, remainder) = step_plan(horizon, params.dt);

    let mut current = state.clone();
    let mut record = TrajectoryRecord::new(observers);
    let mut stepper = Stepper::new(params, dt);
    let energy = |stepper: &mut Stepper, s: &SpectralState| stepper.ws.hamiltonian(s, params.alpha, &params.quad);
    let e0 = energy(&mut stepper, &current);
    record.push(0.0, &current, e0);

    let chunk = if observers.every == 0 {
        CHECK_EVERY
    } else {
        observers.every.min(CHECK_EVERY)
    };
    let mut done = 0;
    while done < n_steps {
        let k = chunk.min(n_steps - done);
        advance(&mut stepper, params, &mut current, k, dt)?;
        done += k;
        if !current.is_finite() {
            return Err(Error::IntegratorAbort {
                time: done as f64 * dt,
                step: done,
            });
        }
        let at_record = observers.every != 0 && done % observers.every == 0;
        if at_record || (done == n_steps && remainder == 0.0) {
            let t = if done == n_steps && remainder == 0.0 {
                horizon
            } else {
                done as f64 * dt
            };
            let e = energy(&mut stepper, &current);
            record.push(t, &current, e);
        }
    }
    if remainder > 0.0 {
        let mut last = Stepper::new(params, sign * remainder);
        advance(&mut last, params, &mut current, 1, sign * remainder)?;
        if !current.is_finite() {
            return Err(Error::IntegratorAbort {
                time: horizon,
                step: n_steps + 1,
            });
        }
        let e = energy(&mut stepper, &current);
        record.push(horizon, &current, e);
    }
    Ok((current, record))
}

fn advance(stepper: &mut Stepper, params: &FlowParams, state: &mut SpectralState, k: usize, dt: f64) -> Result<()> {
    match params.scheme {
        Scheme::Strang => stepper.strang_run(state.coeffs_mut(), k),
        Scheme::Lie => {
            for _ in 0..k {
                stepper.lie(state.coeffs_mut());
            }
        }
        Scheme::Picard => {
            let opts = PicardOptions::stepper();
            for _ in 0..k {
                let sol = picard_solve(state, dt, params, &opts)?;
                *state = sol.state;
            }
        }
    }
    Ok(())
}

/// Final state only.
pub fn flow(state: &SpectralState, params: &FlowParams, horizon: f64) -> Result<SpectralState> {
    Ok(evolve(state, params, horizon, &Observers::endpoints())?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::sample_gaussian;
    use crate::spectral::sobolev_norm;

    fn params(n: usize, dt: f64) -> FlowParams {
        FlowParams::with_default_grid(1.0, n, dt).unwrap()
    }

    #[test]
    fn step_plans() {
        assert_eq!(step_plan(1.0, 1e-3), (1000, 0.0));
        assert_eq!(step_plan(100.0, 1e-2), (10000, 0.0));
        let (n, r) = step_plan(0.105, 0.01);
        assert_eq!(n, 10);
        assert!((r - 0.005).abs() < 1e-15);
        assert_eq!(step_plan(0.0, 0.1), (0, 0.0));
    }

    #[test]
    fn zero_horizon() {
        let p = params(8, 1e-2);
        let x = sample_gaussian(8, 1, 0);
        let (y, rec) = evolve(&x, &p, 0.0, &Observers::every(1).with_sobolev(&[0.25])).unwrap();
        assert_eq!(y, x);
        assert_eq!(rec.len(), 1);
        assert_eq!(rec.times, vec![0.0]);
    }

    #[test]
    fn record_cadence_and_final_time() {
        let p = params(8, 0.01);
        let x = sample_gaussian(8, 1, 1);
        let obs = Observers::every(10).with_sobolev(&[0.0, 0.25]).with_modes(&[1, 3]);
        let (_, rec) = evolve(&x, &p, 0.255, &obs).unwrap();
        assert_eq!(rec.times.len(), 4);
        assert_eq!(*rec.times.last().unwrap(), 0.255);
        assert!(rec.times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(rec.sobolev_norms[1].1.len(), rec.len());
        assert_eq!(rec.selected_modes[1].1.len(), rec.len());
        let table = rec.to_table();
        assert_eq!(
            table.header,
            vec!["time", "energy", "hs_0", "hs_0.25", "re_c1", "im_c1", "re_c3", "im_c3"]
        );
        assert!(evolve(&x, &p, 0.1, &Observers::endpoints().with_modes(&[9])).is_err());
    }

    #[test]
    fn remainder_step_is_consistent() {
        // 0.1 with dt 0.03 is 3 steps + 0.01; compare with dt 0.01 reference.
        let x = sample_gaussian(8, 3, 3);
        let coarse = flow(&x, &params(8, 0.03), 0.1).unwrap();
        let fine = flow(&x, &params(8, 1e-4), 0.1).unwrap();
        assert!(sobolev_norm(&coarse.sub(&fine).unwrap(), 0.0) < 1e-3);
    }

    #[test]
    fn reversibility() {
        let p = params(16, 1e-3);
        let x = sample_gaussian(16, 21, 0);
        let y = flow(&x, &p, 0.5).unwrap();
        let back = flow(&y, &p, -0.5).unwrap();
        let err = sobolev_norm(&back.sub(&x).unwrap(), 0.0);
        assert!(err < 1e-11, "{err}");
    }

    #[test]
    fn lie_is_first_order() {
        let x = sample_gaussian(8, 2, 2);
        let reference = flow(&x, &params(8, 1e-5), 0.2).unwrap();
        let err = |dt: f64| {
            let p = params(8, dt).with_scheme(Scheme::Lie);
            sobolev_norm(&flow(&x, &p, 0.2).unwrap().sub(&reference).unwrap(), 0.0)
        };
        let ratio = err(2e-3) / err(1e-3);
        assert!((1.8..2.2).contains(&ratio), "{ratio}");
    }

    #[test]
    fn energy_drift_small() {
        let p = params(32, 1e-3);
        let x = sample_gaussian(32, 17, 0);
        let (_, rec) = evolve(&x, &p, 1.0, &Observers::every(10)).unwrap();
        assert!(rec.max_relative_energy_drift() < 1e-5);
    }

    #[test]
    fn nan_aborts() {
        let p = params(8, 1e-2);
        let mut bad = SpectralState::zeros(8);
        bad.coeffs_mut()[0] = Complex64::new(1e300, 0.0);
        assert!(matches!(
            evolve(&bad, &p, 0.1, &Observers::endpoints()),
            Err(Error::IntegratorAbort { .. })
        ));
    }
}
