use num_complex::Complex64;

use super::quadrature::RadialQuadrature;
use super::state::SpectralState;
use crate::error::{Error, Result};

/// Grid values `u(r_j) = sum_{n<=N} c_n e_n(r_j)` on the quadrature nodes.
pub fn synthesize(state: &SpectralState, quad: &RadialQuadrature) -> Result<Vec<Complex64>> {
    quad.check_capacity(state.n_modes())?;
    Ok(quad.synth_complex(state.coeffs()))
}

/// Grid values of `Re u` only.
pub fn synthesize_real(state: &SpectralState, quad: &RadialQuadrature) -> Result<Vec<f64>> {
    quad.check_capacity(state.n_modes())?;
    let mut out = vec![0.0; quad.len()];
    quad.synth_real(&state.re(), &mut out);
    Ok(out)
}

/// Coefficients `c_n = sum_j w_j u(r_j) e_n(r_j)` for `n = 1..=n_modes`.
pub fn analyze(values: &[Complex64], quad: &RadialQuadrature, n_modes: usize) -> Result<SpectralState> {
    if values.len() != quad.len() {
        return Err(Error::LengthMismatch {
            expected: quad.len(),
            actual: values.len(),
        });
    }
    if n_modes == 0 {
        return Err(Error::InvalidArgument("n_modes must be >= 1".into()));
    }
    quad.check_capacity(n_modes)?;
    SpectralState::new(quad.analyze_complex(values, n_modes))
}

/// `( sum_j w_j |u(r_j)|^p )^{1/p}`.
pub fn lebesgue_norm(state: &SpectralState, p: f64, quad: &RadialQuadrature) -> Result<f64> {
    check_exponent(p)?;
    let u = synthesize(state, quad)?;
    Ok(power_integral(u.iter().map(|z| z.norm()), p, quad).powf(1.0 / p))
}

/// `∫ |Re u|^p r^2 dr` by quadrature (no outer root).
pub fn real_power_integral(state: &SpectralState, p: f64, quad: &RadialQuadrature) -> Result<f64> {
    check_exponent(p)?;
    let v = synthesize_real(state, quad)?;
    Ok(power_integral(v.iter().map(|x| x.abs()), p, quad))
}

pub(crate) fn power_integral(abs_values: impl Iterator<Item = f64>, p: f64, quad: &RadialQuadrature) -> f64 {
    quad.weights()
        .iter()
        .zip(abs_values)
        .map(|(w, a)| w * abs_pow(a, p))
        .sum()
}

/// `a^p` for `a >= 0` with cheap paths for small integer exponents.
#[inline]
pub(crate) fn abs_pow(a: f64, p: f64) -> f64 {
    if p == 2.0 {
        a * a
    } else if p == 3.0 {
        a * a * a
    } else if p == 4.0 {
        let a2 = a * a;
        a2 * a2
    } else if a == 0.0 {
        0.0
    } else {
        a.powf(p)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Lebesgue exponent must be >= 1, got {p}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::basis::eval_basis;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Grid index of `r` on a uniform grid.
    fn index_of(quad: &RadialQuadrature, r: f64) -> usize {
        quad.nodes().iter().position(|&x| (x - r).abs() < 1e-15).unwrap()
    }

    #[test]
    fn single_mode_synthesis() {
        let quad = RadialQuadrature::uniform(64).unwrap();
        let e1 = SpectralState::single_mode(8, 1, c(1.0, 0.0)).unwrap();
        let u = synthesize(&e1, &quad).unwrap();
        assert_abs_diff_eq!(u[index_of(&quad, 0.5)].re, 2.82842712474619, epsilon = 1e-13);
        let zero = synthesize(&SpectralState::zeros(8), &quad).unwrap();
        assert!(zero.iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn two_mode_synthesis_matches_direct_sum() {
        let quad = RadialQuadrature::uniform(64).unwrap();
        let x = SpectralState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let u = synthesize(&x, &quad).unwrap();
        let direct = eval_basis(1, 0.25).unwrap() + eval_basis(2, 0.25).unwrap();
        let expected = SQRT_2 * ((std::f64::consts::PI / 4.0).sin() + 1.0) / 0.25;
        assert_abs_diff_eq!(direct, expected, epsilon = 1e-13);
        assert_abs_diff_eq!(u[index_of(&quad, 0.25)].re, expected, epsilon = 1e-13);
    }

    #[test]
    fn capacity_and_length_errors() {
        let quad = RadialQuadrature::uniform(64).unwrap();
        assert!(matches!(
            synthesize(&SpectralState::zeros(9), &quad),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            analyze(&[c(0.0, 0.0); 10], &quad, 4),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn analyze_recovers_single_mode() {
        let quad = RadialQuadrature::uniform(128).unwrap();
        let e5 = SpectralState::single_mode(16, 5, c(1.0, 0.0)).unwrap();
        let back = analyze(&synthesize(&e5, &quad).unwrap(), &quad, 16).unwrap();
        for (i, z) in back.coeffs().iter().enumerate() {
            let expected = if i == 4 { 1.0 } else { 0.0 };
            assert!((z - c(expected, 0.0)).norm() <= 1e-12);
        }
        let zero = analyze(&vec![c(0.0, 0.0); quad.len()], &quad, 16).unwrap();
        assert_eq!(zero, SpectralState::zeros(16));
    }

    #[test]
    fn lebesgue_basics() {
        let quad = RadialQuadrature::uniform(64).unwrap();
        let e1 = SpectralState::single_mode(8, 1, c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(lebesgue_norm(&e1, 2.0, &quad).unwrap(), 1.0, epsilon = 1e-13);
        assert_eq!(lebesgue_norm(&SpectralState::zeros(8), 3.5, &quad).unwrap(), 0.0);
        assert!(lebesgue_norm(&e1, 0.5, &quad).is_err());
        assert!(lebesgue_norm(&e1, f64::NAN, &quad).is_err());
    }

    #[test]
    fn abs_pow_fast_paths_match_powf() {
        for a in [0.0, 0.3, 1.0, 2.7] {
            for p in [2.0, 3.0, 4.0, 2.5] {
                assert_abs_diff_eq!(abs_pow(a, p), a.powf(p), epsilon = 1e-14);
            }
        }
    }
}
