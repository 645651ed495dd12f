//! Splitting of the truncated flow into two exactly solvable pieces.
//!
//! The linear part rotates each coefficient, `c_n -> exp(-i z_n t) c_n`.
//! The nonlinear part only moves `b`, and its force depends on `a` alone, so
//! `b_n -> b_n - t z_n^{-1} <|v|^α v, e_n>` is exact for any `t`. Both maps
//! preserve `prod da_n db_n`.

use std::sync::Arc;

use num_complex::Complex64;

use super::field::Workspace;
use crate::error::{Error, Result};
use crate::spectral::{RadialQuadrature, SpectralState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `L(dt/2) K(dt) L(dt/2)`, second order.
    Strang,
    /// `K(dt) L(dt)`, first order.
    Lie,
    /// Duhamel fixed point on each step.
    Picard,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strang" => Ok(Self::Strang),
            "lie" => Ok(Self::Lie),
            "picard" => Ok(Self::Picard),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Parameters of the truncated flow `Phi_N`.
#[derive(Debug, Clone)]
pub struct FlowParams {
    pub alpha: f64,
    pub n_modes: usize,
    pub dt: f64,
    pub quad: Arc<RadialQuadrature>,
    pub scheme: Scheme,
    /// `false` switches the kick off, leaving the free flow.
    pub nonlinear: bool,
}

impl FlowParams {
    pub fn new(alpha: f64, n_modes: usize, dt: f64, quad: Arc<RadialQuadrature>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        if n_modes == 0 {
            return Err(Error::InvalidArgument("n_modes must be >= 1".into()));
        }
        quad.check_capacity(n_modes)?;
        Ok(Self {
            alpha,
            n_modes,
            dt,
            quad,
            scheme: Scheme::Strang,
            nonlinear: true,
        })
    }

    /// Default grid `M = 8N`.
    pub fn with_default_grid(alpha: f64, n_modes: usize, dt: f64) -> Result<Self> {
        Self::new(alpha, n_modes, dt, Arc::new(RadialQuadrature::for_modes(n_modes)?))
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub(crate) fn check_state(&self, state: &SpectralState) -> Result<()> {
        if state.n_modes() != self.n_modes {
            return Err(Error::LengthMismatch {
                expected: self.n_modes,
                actual: state.n_modes(),
            });
        }
        Ok(())
    }
}

/// `exp(-i pi n t)` with `n t` reduced mod 2 first, so `t = 2` is exactly the identity.
#[inline]
pub(crate) fn free_phase(n: usize, t: f64) -> Complex64 {
    let turns = (n as f64 * t).rem_euclid(2.0);
    let theta = std::f64::consts::PI * turns;
    Complex64::new(theta.cos(), -theta.sin())
}

pub(crate) fn phases(n_modes: usize, t: f64) -> Vec<Complex64> {
    (1..=n_modes).map(|n| free_phase(n, t)).collect()
}

/// Free evolution `c_n -> exp(-i z_n t) c_n`.
pub fn linear_substep(state: &SpectralState, t: f64) -> SpectralState {
    let mut out = state.clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= free_phase(i + 1, t);
    }
    out
}

/// Exact flow of the potential part for time `t`.
pub fn nonlinear_substep(state: &SpectralState, t: f64, alpha: f64, quad: &RadialQuadrature) -> Result<SpectralState> {
    quad.check_capacity(state.n_modes())?;
    let mut out = state.clone();
    let mut ws = Workspace::new(quad, state.n_modes());
    ws.kick(out.coeffs_mut(), t, alpha, quad);
    Ok(out)
}

/// One Strang step `L(dt/2) ∘ K(dt) ∘ L(dt/2)`.
pub fn strang_step(state: &SpectralState, params: &FlowParams) -> Result<SpectralState> {
    params.check_state(state)?;
    let mut out = state.clone();
    let mut stepper = Stepper::new(params, params.dt);
    stepper.strang(out.coeffs_mut());
    Ok(out)
}

/// One Lie step `L(dt) ∘ K(dt)`.
pub fn lie_step(state: &SpectralState, params: &FlowParams) -> Result<SpectralState> {
    params.check_state(state)?;
    let mut out = state.clone();
    let mut stepper = Stepper::new(params, params.dt);
    stepper.lie(out.coeffs_mut());
    Ok(out)
}

/// Allocation-free stepping with cached phase factors for a fixed `dt`.
pub(crate) struct Stepper<'a> {
    params: &'a FlowParams,
    pub(crate) ws: Workspace,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(params: &'a FlowParams, dt: f64) -> Self {
        Self {
            params,
            ws: Workspace::new(&params.quad, params.n_modes),
            dt,
            half: phases(params.n_modes, 0.5 * dt),
            full: phases(params.n_modes, dt),
        }
    }

    #[inline]
    fn rotate(coeffs: &mut [Complex64], phase: &[Complex64]) {
        for (c, p) in coeffs.iter_mut().zip(phase) {
            *c *= p;
        }
    }

    #[inline]
    fn kick(&mut self, coeffs: &mut [Complex64], t: f64) {
        if self.params.nonlinear {
            self.ws.kick(coeffs, t, self.params.alpha, &self.params.quad);
        }
    }

    pub(crate) fn strang(&mut self, coeffs: &mut [Complex64]) {
        Self::rotate(coeffs, &self.half);
        self.kick(coeffs, self.dt);
        Self::rotate(coeffs, &self.half);
    }

    pub(crate) fn lie(&mut self, coeffs: &mut [Complex64]) {
        self.kick(coeffs, self.dt);
        Self::rotate(coeffs, &self.full);
    }

    /// `k >= 1` consecutive Strang steps with the inner half rotations merged.
    pub(crate) fn strang_run(&mut self, coeffs: &mut [Complex64], k: usize) {
        if k == 0 {
            return;
        }
        Self::rotate(coeffs, &self.half);
        self.kick(coeffs, self.dt);
        for _ in 1..k {
            Self::rotate(coeffs, &self.full);
            self.kick(coeffs, self.dt);
        }
        Self::rotate(coeffs, &self.half);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::sample_gaussian;
    use crate::spectral::sobolev_norm;
    use proptest::prelude::*;

    fn params(n: usize, dt: f64) -> FlowParams {
        FlowParams::with_default_grid(1.0, n, dt).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(FlowParams::with_default_grid(2.0, 8, 1e-3).is_err());
        assert!(FlowParams::with_default_grid(0.0, 8, 1e-3).is_err());
        assert!(FlowParams::with_default_grid(1.0, 8, 0.0).is_err());
        let q = Arc::new(RadialQuadrature::uniform(64).unwrap());
        assert!(FlowParams::new(1.0, 9, 1e-3, q).is_err());
    }

    #[test]
    fn linear_periodicity_and_identity() {
        let x = sample_gaussian(64, 5, 0);
        let y = linear_substep(&x, 2.0);
        for (a, b) in x.coeffs().iter().zip(y.coeffs()) {
            assert!((a - b).norm() <= 1e-13 * a.norm());
        }
        assert_eq!(linear_substep(&x, 0.0), x);
    }

    #[test]
    fn kick_edge_cases() {
        let quad = RadialQuadrature::uniform(64).unwrap();
        let imag = SpectralState::new(vec![Complex64::new(0.0, 0.4); 8]).unwrap();
        assert_eq!(nonlinear_substep(&imag, 3.0, 1.0, &quad).unwrap(), imag);
        let x = sample_gaussian(8, 6, 1);
        assert_eq!(nonlinear_substep(&x, 0.0, 1.0, &quad).unwrap(), x);
    }

    #[test]
    fn strang_zero_and_linear_only() {
        let p = params(8, 0.01);
        let z = SpectralState::zeros(8);
        assert_eq!(strang_step(&z, &p).unwrap(), z);
        let x = sample_gaussian(8, 2, 3);
        let lin = p.clone().linear_only();
        let a = strang_step(&x, &lin).unwrap();
        let b = linear_substep(&x, 0.01);
        for (u, v) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((u - v).norm() <= 1e-15 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn fused_run_matches_repeated_steps() {
        let p = params(16, 1e-3);
        let x = sample_gaussian(16, 1, 1);
        let mut stepped = x.clone();
        for _ in 0..50 {
            stepped = strang_step(&stepped, &p).unwrap();
        }
        let mut fused = x.clone();
        Stepper::new(&p, p.dt).strang_run(fused.coeffs_mut(), 50);
        for (u, v) in stepped.coeffs().iter().zip(fused.coeffs()) {
            assert!((u - v).norm() <= 1e-12);
        }
    }

    #[test]
    fn strang_is_second_order() {
        // Self-convergence against a dt/16 reference at T = 0.1.
        let n = 16;
        let x = sample_gaussian(n, 12, 0);
        let run = |dt: f64| {
            let p = params(n, dt);
            let steps = (0.1 / dt).round() as usize;
            let mut s = x.clone();
            Stepper::new(&p, dt).strang_run(s.coeffs_mut(), steps);
            s
        };
        let reference = run(0.1 / 1600.0);
        let e1 = sobolev_norm(&run(0.1 / 100.0).sub(&reference).unwrap(), 0.0);
        let e2 = sobolev_norm(&run(0.1 / 200.0).sub(&reference).unwrap(), 0.0);
        let ratio = e1 / e2;
        assert!((3.5..4.6).contains(&ratio), "ratio {ratio}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn substeps_are_exact(seed in 0u64..1000, t in -3.0..3.0f64) {
            let quad = RadialQuadrature::uniform(64).unwrap();
            let x = sample_gaussian(8, seed, 0);
            let k = nonlinear_substep(&x, t, 1.0, &quad).unwrap();
            prop_assert_eq!(k.re(), x.re());
            let l = linear_substep(&x, t);
            for (a, b) in l.coeffs().iter().zip(x.coeffs()) {
                prop_assert!((a.norm() - b.norm()).abs() <= 1e-13 * b.norm());
            }
            for s in [0.0, 0.25, 1.0] {
                let (nl, nx) = (sobolev_norm(&l, s), sobolev_norm(&x, s));
                prop_assert!((nl - nx).abs() <= 1e-13 * nx);
            }
        }
    }
}
