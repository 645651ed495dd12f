//! Closed-form Gaussian exponential moments and the tail bound they imply.
//!
//! Under `mu_N`, `z_n^2 |c_n|^2 / 2` are i.i.d. Exp(1), hence
//! `E exp(±c ||u||_{H^s}^2) = prod_n 1 / (1 ∓ 2c / z_n^{2-2s})`, and by
//! Chebyshev `rho_N(||u||_{H^s} > Λ) <= mu_N(...) <= C_s exp(-c Λ^2)`.

use crate::error::{Error, Result};
use crate::spectral::basis::frequency;
use crate::spectral::SobolevIndex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentSign {
    Plus,
    Minus,
}

/// `(c, s)` with `c > 0`, `s < 1/2` and `2c < pi^{2-2s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParameter {
    c: f64,
    s: SobolevIndex,
}

impl TailParameter {
    pub fn new(c: f64, s: f64) -> Result<Self> {
        let s = SobolevIndex::for_measure(s)?;
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("tail constant must be positive, got {c}")));
        }
        let limit = std::f64::consts::PI.powf(2.0 - 2.0 * s.value());
        if 2.0 * c >= limit {
            return Err(Error::Domain(format!(
                "2c = {} must stay below pi^(2-2s) = {limit}",
                2.0 * c
            )));
        }
        Ok(Self { c, s })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn s(&self) -> f64 {
        self.s.value()
    }
}

/// `E_{mu_N}[exp(±c ||u||^2_{H^s})]` for a validated parameter.
pub fn exp_moment_product(n_modes: usize, t: &TailParameter, sign: MomentSign) -> Result<f64> {
    exp_moment_product_raw(n_modes, t.c(), t.s(), sign)
}

/// Product formula without the `s < 1/2` restriction; fails if a factor is not positive.
pub fn exp_moment_product_raw(n_modes: usize, c: f64, s: f64, sign: MomentSign) -> Result<f64> {
    let sgn = match sign {
        MomentSign::Plus => 1.0,
        MomentSign::Minus => -1.0,
    };
    // log-sum keeps large N from under/overflowing
    let mut log_prod = 0.0;
    for n in 1..=n_modes {
        let factor = 1.0 - sgn * 2.0 * c / frequency(n).powf(2.0 - 2.0 * s);
        if !(factor > 0.0) {
            return Err(Error::Domain(format!(
                "factor {n} of the product is {factor}, not positive"
            )));
        }
        log_prod -= factor.ln();
    }
    Ok(log_prod.exp())
}

/// `C_s exp(-c Λ^2)`.
pub fn tail_probability_bound(lambda: f64, c: f64, c_s: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("tail rate must be positive, got {c}")));
    }
    Ok(c_s * (-c * lambda * lambda).exp())
}
