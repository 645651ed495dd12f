//! Radial quadratures for `∫_0^1 f(r) r^2 dr` and the transforms between
//! Galerkin coefficients and grid values.
//!
//! The default grid is uniform in `r`: nodes `r_j = j / M`, `j = 1..M-1`,
//! weights `r_j^2 / M`. On it `g(r) = r u(r) = sqrt(2) sum_n c_n sin(pi n r)`
//! is a discrete sine series, so pairings of band-limited functions are exact
//! and synthesis/analysis reduce to a DST-I. Gauss-Legendre is kept as an
//! independent cross-check.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::basis::basis_unchecked;
use crate::error::{Error, Result};

/// Default grid points per mode.
pub const OVERSAMPLING: usize = 8;

/// Above this many table entries the uniform grid switches to the FFT path.
const TABLE_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    UniformSine,
    GaussLegendre,
}

impl QuadratureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::UniformSine => "uniform-sine",
            Self::GaussLegendre => "gauss-legendre",
        }
    }
}

impl std::str::FromStr for QuadratureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-sine" => Ok(Self::UniformSine),
            "gauss-legendre" => Ok(Self::GaussLegendre),
            other => Err(Error::InvalidArgument(format!("unknown quadrature kind `{other}`"))),
        }
    }
}

#[derive(Clone)]
enum Plan {
    /// Row `n` holds `e_{n+1}(r_j)`; `analysis` holds `w_j e_{n+1}(r_j)`.
    Table { synthesis: Vec<f64>, analysis: Vec<f64> },
    /// DST-I of length `M - 1` through a complex FFT of length `2M`.
    Sine { fft: Arc<dyn Fft<f64>> },
}

/// Nodes and weights approximating `∫_0^1 f(r) r^2 dr ≈ sum_j w_j f(r_j)`.
#[derive(Clone)]
pub struct RadialQuadrature {
    kind: QuadratureKind,
    grid_points: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    plan: Plan,
}

impl fmt::Debug for RadialQuadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialQuadrature")
            .field("kind", &self.kind)
            .field("grid_points", &self.grid_points)
            .field("capacity", &self.capacity())
            .field("fft", &matches!(self.plan, Plan::Sine { .. }))
            .finish()
    }
}

impl RadialQuadrature {
    /// Uniform sine-variable grid with parameter `M` (`M - 1` interior nodes).
    pub fn uniform(grid_points: usize) -> Result<Self> {
        Self::build(QuadratureKind::UniformSine, grid_points)
    }

    /// `M`-point Gauss-Legendre rule mapped onto `(0, 1)`.
    pub fn gauss_legendre(grid_points: usize) -> Result<Self> {
        Self::build(QuadratureKind::GaussLegendre, grid_points)
    }

    /// Default grid for `n_modes`: uniform with `M = 8 N`.
    pub fn for_modes(n_modes: usize) -> Result<Self> {
        Self::uniform(OVERSAMPLING * n_modes)
    }

    pub fn new(kind: QuadratureKind, grid_points: usize) -> Result<Self> {
        Self::build(kind, grid_points)
    }

    fn build(kind: QuadratureKind, grid_points: usize) -> Result<Self> {
        if grid_points < OVERSAMPLING {
            return Err(Error::InvalidArgument(format!(
                "need at least {OVERSAMPLING} grid points, got {grid_points}"
            )));
        }
        let (nodes, weights) = match kind {
            QuadratureKind::UniformSine => {
                let m = grid_points as f64;
                let nodes: Vec<f64> = (1..grid_points).map(|j| j as f64 / m).collect();
                let weights = nodes.iter().map(|r| r * r / m).collect();
                (nodes, weights)
            }
            QuadratureKind::GaussLegendre => gauss_legendre_unit(grid_points),
        };
        let capacity = grid_points / OVERSAMPLING;
        let plan = if kind == QuadratureKind::UniformSine && capacity * nodes.len() > TABLE_LIMIT {
            Plan::Sine {
                fft: FftPlanner::new().plan_fft_forward(2 * grid_points),
            }
        } else {
            let mut synthesis = Vec::with_capacity(capacity * nodes.len());
            let mut analysis = Vec::with_capacity(capacity * nodes.len());
            for n in 1..=capacity {
                for (r, w) in nodes.iter().zip(&weights) {
                    let e = basis_unchecked(n, *r);
                    synthesis.push(e);
                    analysis.push(w * e);
                }
            }
            Plan::Table { synthesis, analysis }
        };
        Ok(Self {
            kind,
            grid_points,
            nodes,
            weights,
            plan,
        })
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    /// The grid parameter `M`.
    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest mode count this grid supports, `N_max = M / 8`.
    pub fn capacity(&self) -> usize {
        self.grid_points / OVERSAMPLING
    }

    pub fn uses_fft(&self) -> bool {
        matches!(self.plan, Plan::Sine { .. })
    }

    pub fn check_capacity(&self, n_modes: usize) -> Result<()> {
        if n_modes > self.capacity() {
            return Err(Error::Capacity {
                grid_points: self.grid_points,
                capacity: self.capacity(),
                requested: n_modes,
            });
        }
        Ok(())
    }

    /// `sum_j w_j f(r_j)`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Grid values of `sum_n a_n e_n` for real coefficients; `out.len() == self.len()`.
    ///
    /// Capacity is the caller's responsibility.
    pub(crate) fn synth_real(&self, coeffs: &[f64], out: &mut [f64]) {
        debug_assert!(coeffs.len() <= self.capacity() && out.len() == self.len());
        match &self.plan {
            Plan::Table { synthesis, .. } => {
                let m = self.len();
                out.fill(0.0);
                for (row, &a) in synthesis.chunks_exact(m).zip(coeffs) {
                    if a != 0.0 {
                        for (o, e) in out.iter_mut().zip(row) {
                            *o += a * e;
                        }
                    }
                }
            }
            Plan::Sine { fft } => {
                let input: Vec<Complex64> = coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                let g = self.dst_synthesis(fft.as_ref(), &input);
                for ((o, gj), r) in out.iter_mut().zip(&g).zip(&self.nodes) {
                    *o = gj.re / r;
                }
            }
        }
    }

    /// `out[n-1] = sum_j w_j values_j e_n(r_j)` for `n = 1..=out.len()`.
    pub(crate) fn analyze_real(&self, values: &[f64], out: &mut [f64]) {
        debug_assert!(out.len() <= self.capacity() && values.len() == self.len());
        match &self.plan {
            Plan::Table { analysis, .. } => {
                let m = self.len();
                for (o, row) in out.iter_mut().zip(analysis.chunks_exact(m)) {
                    *o = row.iter().zip(values).map(|(a, v)| a * v).sum();
                }
            }
            Plan::Sine { fft } => {
                let g: Vec<Complex64> = values
                    .iter()
                    .zip(&self.nodes)
                    .map(|(v, r)| Complex64::new(v * r, 0.0))
                    .collect();
                let c = self.dst_analysis(fft.as_ref(), &g, out.len());
                for (o, ci) in out.iter_mut().zip(c) {
                    *o = ci.re;
                }
            }
        }
    }

    pub(crate) fn synth_complex(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        match &self.plan {
            Plan::Table { synthesis, .. } => {
                let m = self.len();
                let mut out = vec![Complex64::new(0.0, 0.0); m];
                for (row, c) in synthesis.chunks_exact(m).zip(coeffs) {
                    for (o, e) in out.iter_mut().zip(row) {
                        *o += c * e;
                    }
                }
                out
            }
            Plan::Sine { fft } => {
                let g = self.dst_synthesis(fft.as_ref(), coeffs);
                g.into_iter().zip(&self.nodes).map(|(gj, r)| gj / r).collect()
            }
        }
    }

    pub(crate) fn analyze_complex(&self, values: &[Complex64], n_modes: usize) -> Vec<Complex64> {
        match &self.plan {
            Plan::Table { analysis, .. } => {
                let m = self.len();
                analysis
                    .chunks_exact(m)
                    .take(n_modes)
                    .map(|row| row.iter().zip(values).map(|(a, v)| v * a).sum())
                    .collect()
            }
            Plan::Sine { fft } => {
                let g: Vec<Complex64> = values.iter().zip(&self.nodes).map(|(v, r)| v * r).collect();
                self.dst_analysis(fft.as_ref(), &g, n_modes)
            }
        }
    }

    /// `g_j = sqrt(2) sum_n c_n sin(pi n j / M)`, `j = 1..M-1`.
    fn dst_synthesis(&self, fft: &dyn Fft<f64>, coeffs: &[Complex64]) -> Vec<Complex64> {
        let x: Vec<Complex64> = coeffs.iter().map(|c| c * std::f64::consts::SQRT_2).collect();
        dst1(fft, self.grid_points, &x, self.len())
    }

    /// `c_n = (sqrt(2) / M) sum_j g_j sin(pi n j / M)`, `n = 1..=n_modes`.
    fn dst_analysis(&self, fft: &dyn Fft<f64>, g: &[Complex64], n_modes: usize) -> Vec<Complex64> {
        let scale = std::f64::consts::SQRT_2 / self.grid_points as f64;
        dst1(fft, self.grid_points, g, n_modes)
            .into_iter()
            .map(|v| v * scale)
            .collect()
    }
}

/// `X_k = sum_{j=1}^{M-1} x_j sin(pi j k / M)` for `k = 1..=n_out`, with
/// `x[j-1] = x_j` (missing entries are zero). Uses the odd extension of
/// length `2M`, whose DFT is `-2i X_k`.
fn dst1(fft: &dyn Fft<f64>, m: usize, x: &[Complex64], n_out: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut buf = vec![zero; 2 * m];
    for (j, &v) in x.iter().enumerate().take(m - 1) {
        buf[j + 1] = v;
        buf[2 * m - 1 - j] = -v;
    }
    fft.process(&mut buf);
    buf[1..=n_out]
        .iter()
        .map(|y| Complex64::new(-y.im, y.re) * 0.5)
        .collect()
}

/// Gauss-Legendre nodes/weights mapped to `(0, 1)` with the `r^2` factor folded in.
fn gauss_legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_m.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x descends from near +1; store ascending in r.
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    let mapped: Vec<f64> = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w = mapped.iter().zip(&weights).map(|(r, w)| 0.5 * w * r * r).collect();
    (mapped, w)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
