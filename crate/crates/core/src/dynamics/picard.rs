//! Fixed-point solver for the Duhamel form of the truncated equation,
//!
//! ```text
//! u(t) = S(t) u0 - i ∫_0^t S(t - τ) (sqrt(-Δ))^{-1} S_N F(u(τ)) dτ,   F(u) = |Re u|^α Re u,
//! ```
//!
//! with `S(t) = exp(-i t sqrt(-Δ))`. Iterates are stored on a uniform time
//! mesh in the interaction picture `w(t) = S(-t) u(t)`, where the update is a
//! plain cumulative integral, evaluated by composite Simpson (plus a
//! third-order closing panel at odd nodes).

use num_complex::Complex64;

use super::field::Workspace;
use super::splitting::{free_phase, FlowParams};
use crate::error::{Error, Result};
use crate::spectral::basis::frequency;
use crate::spectral::state::sobolev_norm_sq;
use crate::spectral::SpectralState;

#[derive(Debug, Clone, PartialEq)]
pub struct PicardOptions {
    pub iterations: usize,
    /// Odd number of mesh points on `[0, T]`.
    pub mesh_points: usize,
    /// Norm used for diagnostics and the time limit.
    pub sigma: f64,
    /// Local-time heuristic `T <= c (1 + ||u0||_{H^σ})^{-γ}`.
    pub time_constant: f64,
    pub time_exponent: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            iterations: 8,
            mesh_points: 201,
            sigma: 0.25,
            time_constant: 0.5,
            time_exponent: 2.0,
        }
    }
}

impl PicardOptions {
    /// Settings for using the solver as a one-step integrator of size `dt`.
    pub fn stepper() -> Self {
        Self {
            iterations: 6,
            mesh_points: 9,
            time_constant: f64::INFINITY,
            ..Self::default()
        }
    }

    pub fn time_limit(&self, u0_norm: f64) -> f64 {
        self.time_constant * (1.0 + u0_norm).powf(-self.time_exponent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardSolution {
    /// `u^K(T)`.
    pub state: SpectralState,
    /// `max_t ||u^{k+1}(t) - u^k(t)||_{H^σ}` for `k = 0..K-1`.
    pub successive_diffs: Vec<f64>,
    /// Differences below this are at rounding level and not expected to contract.
    pub noise_floor: f64,
}

impl PicardSolution {
    /// Ratios `d_k / d_{k+1}` while `d_k` is above the noise floor.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.successive_diffs
            .windows(2)
            .take_while(|w| w[0] > self.noise_floor && w[1] > self.noise_floor)
            .map(|w| w[0] / w[1])
            .collect()
    }
}

/// Runs `opts.iterations` Picard iterations on `[0, horizon]`.
///
/// Fails with [`Error::NonContraction`] when a successive difference above
/// the noise floor grows, and with a domain error when `horizon` exceeds the
/// local-time heuristic.
pub fn picard_solve(
    u0: &SpectralState,
    horizon: f64,
    params: &FlowParams,
    opts: &PicardOptions,
) -> Result<PicardSolution> {
    params.check_state(u0)?;
    if opts.iterations == 0 {
        return Err(Error::InvalidArgument("need at least one iteration".into()));
    }
    if opts.mesh_points < 3 || opts.mesh_points.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "mesh needs an odd number (>= 3) of points, got {}",
            opts.mesh_points
        )));
    }
    let u0_norm = sobolev_norm_sq(u0, opts.sigma).sqrt();
    let limit = opts.time_limit(u0_norm);
    if horizon.abs() > limit {
        return Err(Error::Domain(format!(
            "|T| = {} exceeds the local-time bound {limit:.3e} for ||u0||_H^{} = {u0_norm:.3e}",
            horizon.abs(),
            opts.sigma
        )));
    }
    let n = params.n_modes;
    let m = opts.mesh_points;
    let h = horizon / (m - 1) as f64;
    let times: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();
    // phase[i][k] = exp(-i z_k t_i)
    let phase: Vec<Vec<Complex64>> = times
        .iter()
        .map(|&t| (1..=n).map(|k| free_phase(k, t)).collect())
        .collect();
    let inv_freq: Vec<f64> = (1..=n).map(|k| 1.0 / frequency(k)).collect();

    // u^0(t) = S(t) u0
    let mut iterate: Vec<Vec<Complex64>> = phase
        .iter()
        .map(|ph| u0.coeffs().iter().zip(ph).map(|(c, p)| c * p).collect())
        .collect();
    let mut ws = Workspace::new(&params.quad, n);
    let mut integrand = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    let mut diffs = Vec::with_capacity(opts.iterations);
    let noise_floor = 1e-12 * (1.0 + u0_norm);

    for _ in 0..opts.iterations {
        // G(τ) = S(-τ) [-i z^{-1} F_n(u(τ))]
        for i in 0..m {
            if params.nonlinear {
                ws.compute_force(&iterate[i], params.alpha, &params.quad);
            } else {
                ws.force.fill(0.0);
            }
            for k in 0..n {
                let g = Complex64::new(0.0, -inv_freq[k] * ws.force[k]);
                integrand[i][k] = g * phase[i][k].conj();
            }
        }
        let cumulative = cumulative_simpson(&integrand, h);
        let mut max_diff: f64 = 0.0;
        for i in 0..m {
            let next: Vec<Complex64> = (0..n)
                .map(|k| (u0.coeffs()[k] + cumulative[i][k]) * phase[i][k])
                .collect();
            let d: f64 = next
                .iter()
                .zip(&iterate[i])
                .enumerate()
                .map(|(k, (a, b))| frequency(k + 1).powf(2.0 * opts.sigma) * (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            max_diff = max_diff.max(d);
            iterate[i] = next;
        }
        if iterate
            .last()
            .is_some_and(|u| u.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()))
        {
            return Err(Error::NonFinite("Picard iterate"));
        }
        diffs.push(max_diff);
        if let [.., prev, last] = diffs[..] {
            if prev > noise_floor && last > prev {
                return Err(Error::NonContraction { diffs });
            }
        }
    }
    let state = SpectralState::new(iterate.pop().expect("mesh is non-empty"))?;
    Ok(PicardSolution {
        state,
        successive_diffs: diffs,
        noise_floor,
    })
}

/// `I_i = ∫_{t_0}^{t_i} f` on a uniform mesh, for vector-valued `f`.
fn cumulative_simpson(f: &[Vec<Complex64>], h: f64) -> Vec<Vec<Complex64>> {
    let m = f.len();
    let n = f[0].len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    for k in 0..n {
        for i in 1..m {
            out[i][k] = if i == 1 {
                (f[0][k] * 5.0 + f[1][k] * 8.0 - f[2][k]) * (h / 12.0)
            } else if i % 2 == 0 {
                out[i - 2][k] + (f[i - 2][k] + f[i - 1][k] * 4.0 + f[i][k]) * (h / 3.0)
            } else {
                out[i - 1][k] + (f[i - 1][k] * 8.0 + f[i][k] * 5.0 - f[i - 2][k]) * (h / 12.0)
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve::flow;
    use crate::dynamics::splitting::linear_substep;
    use crate::gibbs::sample_gaussian;
    use crate::spectral::sobolev_norm;

    #[test]
    fn cumulative_simpson_exactness() {
        // quadratics at every node, cubics at the even (pure Simpson) nodes
        let h = 0.1;
        let f: Vec<Vec<Complex64>> = (0..7)
            .map(|i| {
                let t = i as f64 * h;
                vec![Complex64::new(t * t - 2.0 * t, t * t * t)]
            })
            .collect();
        let out = cumulative_simpson(&f, h);
        for (i, row) in out.iter().enumerate() {
            let t = i as f64 * h;
            assert!((row[0].re - (t.powi(3) / 3.0 - t * t)).abs() < 1e-15, "i = {i}");
            if i % 2 == 0 {
                assert!((row[0].im - t.powi(4) / 4.0).abs() < 1e-15, "i = {i}");
            }
        }
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let p = FlowParams::with_default_grid(1.0, 8, 1e-3).unwrap();
        let sol = picard_solve(&SpectralState::zeros(8), 0.05, &p, &PicardOptions::default()).unwrap();
        assert_eq!(sol.state, SpectralState::zeros(8));
    }

    #[test]
    fn free_flow_after_one_iteration() {
        let p = FlowParams::with_default_grid(1.0, 8, 1e-3).unwrap().linear_only();
        let u0 = sample_gaussian(8, 4, 0);
        let opts = PicardOptions {
            iterations: 1,
            ..PicardOptions::default()
        };
        let sol = picard_solve(&u0, 0.05, &p, &opts).unwrap();
        let free = linear_substep(&u0, 0.05);
        for (a, b) in sol.state.coeffs().iter().zip(free.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn agrees_with_splitting() {
        let p = FlowParams::with_default_grid(1.0, 16, 1e-4).unwrap();
        let u0 = sample_gaussian(16, 10, 0);
        let sol = picard_solve(&u0, 0.05, &p, &PicardOptions::default()).unwrap();
        let split = flow(&u0, &p, 0.05).unwrap();
        let err = sobolev_norm(&sol.state.sub(&split).unwrap(), 0.25);
        assert!(err <= 1e-6, "{err}");
        assert!(
            sol.contraction_ratios().iter().all(|&r| r >= 2.0),
            "{:?}",
            sol.successive_diffs
        );
    }

    #[test]
    fn rejects_long_horizons_and_bad_meshes() {
        let p = FlowParams::with_default_grid(1.0, 8, 1e-3).unwrap();
        let u0 = sample_gaussian(8, 4, 0);
        assert!(matches!(
            picard_solve(&u0, 5.0, &p, &PicardOptions::default()),
            Err(Error::Domain(_))
        ));
        let even = PicardOptions {
            mesh_points: 10,
            ..PicardOptions::default()
        };
        assert!(picard_solve(&u0, 0.01, &p, &even).is_err());
    }

    #[test]
    fn reports_non_contraction() {
        // A huge state on a long window makes the iteration blow up.
        let p = FlowParams::with_default_grid(1.0, 8, 1e-3).unwrap();
        let u0 = sample_gaussian(8, 4, 0).scale(300.0);
        let opts = PicardOptions {
            time_constant: f64::INFINITY,
            ..PicardOptions::default()
        };
        match picard_solve(&u0, 0.5, &p, &opts) {
            Err(Error::NonContraction { diffs }) => assert!(diffs.len() >= 2),
            Err(Error::NonFinite(_)) => {}
            other => panic!("expected a contraction failure, got {other:?}"),
        }
    }
}
