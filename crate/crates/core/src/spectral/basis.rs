//! Radial Dirichlet eigenfunctions of the Laplacian on the unit ball of R^3.
//!
//! `e_n(r) = sqrt(2) sin(pi n r) / r`, with `-Δ e_n = (pi n)^2 e_n`. They are
//! orthonormal for the radial measure `r^2 dr` on `(0, 1)`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Below this radius the basis is evaluated through a `sin(x)/x` expansion.
pub const NEAR_ORIGIN: f64 = 1e-8;

/// Square root of the `n`-th Dirichlet eigenvalue, `z_n = pi n`.
pub fn eigenvalue(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroMode(n));
    }
    Ok(frequency(n))
}

/// `pi * n` for a 1-based mode index, without validation.
#[inline]
pub(crate) fn frequency(n: usize) -> f64 {
    PI * n as f64
}

/// Evaluates `e_n(r)` for `r` in `(0, 1]`.
pub fn eval_basis(n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroMode(n));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    Ok(basis_unchecked(n, r))
}

#[inline]
pub(crate) fn basis_unchecked(n: usize, r: f64) -> f64 {
    let k = frequency(n);
    if r < NEAR_ORIGIN {
        let x = k * r;
        SQRT_2 * k * (1.0 - x * x / 6.0)
    } else {
        SQRT_2 * (k * r).sin() / r
    }
}
