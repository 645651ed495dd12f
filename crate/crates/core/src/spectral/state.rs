use num_complex::Complex64;

use super::basis::frequency;
use crate::error::{Error, Result};

/// Galerkin coefficients `c_n = a_n + i b_n` of `u = sum_n c_n e_n`, `n = 1..=N`.
///
/// Index 0 of the storage holds mode 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    coeffs: Vec<Complex64>,
}

impl SpectralState {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a state needs at least one mode".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("state coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(n_modes: usize) -> Self {
        assert!(n_modes >= 1, "a state needs at least one mode");
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); n_modes],
        }
    }

    /// The state `value * e_mode` in `E_N`.
    pub fn single_mode(n_modes: usize, mode: usize, value: Complex64) -> Result<Self> {
        if mode == 0 {
            return Err(Error::ZeroMode(0));
        }
        if mode > n_modes {
            return Err(Error::InvalidArgument(format!(
                "mode {mode} does not fit in {n_modes} modes"
            )));
        }
        let mut s = Self::zeros(n_modes);
        s.coeffs[mode - 1] = value;
        Ok(s)
    }

    /// Builds a state from real and imaginary parts `(a_n, b_n)`.
    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::LengthMismatch {
                expected: re.len(),
                actual: im.len(),
            });
        }
        Self::new(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    #[inline]
    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of the 1-based mode `n`.
    pub fn coeff(&self, n: usize) -> Option<Complex64> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i).copied())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Real parts `a_n`.
    pub fn re(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    /// Imaginary parts `b_n`.
    pub fn im(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.im).collect()
    }

    /// The state with `Im u` removed.
    pub fn real_part(&self) -> Self {
        Self::from_vec_unchecked(self.coeffs.iter().map(|c| Complex64::new(c.re, 0.0)).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_vec_unchecked(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_vec_unchecked(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self::from_vec_unchecked(
            self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x - y).collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self::from_vec_unchecked(
            self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect(),
        ))
    }

    /// Copies into a state with `n_modes` storage, zero-padding or truncating.
    pub fn resized(&self, n_modes: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_modes.max(1)];
        for (dst, src) in coeffs.iter_mut().zip(&self.coeffs) {
            *dst = *src;
        }
        Self::from_vec_unchecked(coeffs)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n_modes() != other.n_modes() {
            return Err(Error::LengthMismatch {
                expected: self.n_modes(),
                actual: other.n_modes(),
            });
        }
        Ok(())
    }
}

/// Coefficients of the real wave data `(f_1, f_2) = (w, w_t)` at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveDataPair {
    pub f1_coeffs: Vec<f64>,
    pub f2_coeffs: Vec<f64>,
}

impl WaveDataPair {
    pub fn new(f1_coeffs: Vec<f64>, f2_coeffs: Vec<f64>) -> Result<Self> {
        if f1_coeffs.len() != f2_coeffs.len() {
            return Err(Error::LengthMismatch {
                expected: f1_coeffs.len(),
                actual: f2_coeffs.len(),
            });
        }
        if f1_coeffs.iter().chain(&f2_coeffs).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("wave data"));
        }
        Ok(Self { f1_coeffs, f2_coeffs })
    }
}

/// Sobolev regularity exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SobolevIndex(pub f64);

impl SobolevIndex {
    /// Index usable with the Gaussian/Gibbs measures, which live below `s = 1/2`.
    pub fn for_measure(s: f64) -> Result<Self> {
        if !(s.is_finite() && s < 0.5) {
            return Err(Error::Domain(format!("measure operations need s < 1/2, got {s}")));
        }
        Ok(Self(s))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for SobolevIndex {
    fn from(s: f64) -> Self {
        Self(s)
    }
}

/// `<x, y> = sum_n c_n(x) conj(c_n(y))`; conjugate-linear in the second slot.
pub fn inner_product(x: &SpectralState, y: &SpectralState) -> Result<Complex64> {
    x.check_dims(y)?;
    Ok(x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a * b.conj()).sum())
}

/// `( sum_n z_n^{2s} |c_n|^2 )^{1/2}`.
pub fn sobolev_norm(state: &SpectralState, s: impl Into<SobolevIndex>) -> f64 {
    sobolev_norm_sq(state, s.into().value()).sqrt()
}

pub(crate) fn sobolev_norm_sq(state: &SpectralState, s: f64) -> f64 {
    if s == 0.0 {
        return state.coeffs.iter().map(|c| c.norm_sqr()).sum();
    }
    state
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| frequency(i + 1).powf(2.0 * s) * c.norm_sqr())
        .sum()
}

/// Applies `(sqrt(-Δ))^gamma`, i.e. multiplies `c_n` by `z_n^gamma`.
pub fn sqrt_laplacian_pow(state: &SpectralState, gamma: f64) -> SpectralState {
    if gamma == 0.0 {
        return state.clone();
    }
    SpectralState::from_vec_unchecked(
        state
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * frequency(i + 1).powf(gamma))
            .collect(),
    )
}

/// `S_N`: zeroes every mode above `n`, keeping the storage length.
pub fn project(state: &SpectralState, n: usize) -> SpectralState {
    let mut out = state.clone();
    for c in out.coeffs.iter_mut().skip(n) {
        *c = Complex64::new(0.0, 0.0);
    }
    out
}

/// `u_0 = f_1 + i (sqrt(-Δ))^{-1} f_2`.
pub fn complexify(data: &WaveDataPair) -> SpectralState {
    SpectralState::from_vec_unchecked(
        data.f1_coeffs
            .iter()
            .zip(&data.f2_coeffs)
            .enumerate()
            .map(|(i, (&f1, &f2))| Complex64::new(f1, f2 / frequency(i + 1)))
            .collect(),
    )
}

/// Inverse of [`complexify`]: `f_1 = Re u`, `f_2 = sqrt(-Δ) Im u`.
pub fn decomplexify(state: &SpectralState) -> WaveDataPair {
    let (f1, f2) = state
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (c.re, frequency(i + 1) * c.im))
        .unzip();
    WaveDataPair {
        f1_coeffs: f1,
        f2_coeffs: f2,
    }
}
