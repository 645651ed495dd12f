use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use radwave::dynamics::{flow, linear_substep, FlowParams};
use radwave::gibbs::{sample_gaussian, tail_probability_bound};
use radwave::spectral::{analyze, complexify, decomplexify, project, sobolev_norm, synthesize};
use radwave::verify::{strichartz_ratio, weighted_ks, weighted_mean_se, weighted_quantile};
use radwave::{RadialQuadrature, SpectralState};

fn state(n: usize) -> impl Strategy<Value = SpectralState> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n)
        .prop_map(|v| SpectralState::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn sample(len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((-5.0..5.0f64, 0.01..1.0f64), 2..len).prop_map(|v| v.into_iter().unzip())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ks_is_symmetric_and_bounded((x, wx) in sample(40), (y, wy) in sample(40)) {
        let d = weighted_ks(&x, &wx, &y, &wy);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - weighted_ks(&y, &wy, &x, &wx)).abs() < 1e-12);
        prop_assert!(weighted_ks(&x, &wx, &x, &wx) < 1e-12);
    }

    #[test]
    fn weighted_mean_within_range((x, w) in sample(50)) {
        let lw: Vec<f64> = w.iter().map(|w| w.ln()).collect();
        let (m, se) = weighted_mean_se(&x, &lw).unwrap();
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(m >= lo - 1e-12 && m <= hi + 1e-12);
        prop_assert!(se >= 0.0);
    }

    #[test]
    fn quantile_is_monotone_in_level((x, w) in sample(50), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(weighted_quantile(&x, &w, lo) <= weighted_quantile(&x, &w, hi));
    }

    #[test]
    fn transform_round_trip(u in state(12)) {
        let quad = RadialQuadrature::for_modes(12).unwrap();
        let back = analyze(&synthesize(&u, &quad).unwrap(), &quad, 12).unwrap();
        for (a, b) in u.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn complexify_inverts(u in state(10)) {
        let back = complexify(&decomplexify(&u));
        for (a, b) in u.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent_and_contracting(u in state(16), k in 1usize..16, s in -0.5..0.5f64) {
        let p = project(&u, k);
        let pp = project(&p, k);
        prop_assert_eq!(p.coeffs(), pp.coeffs());
        prop_assert!(sobolev_norm(&p, s) <= sobolev_norm(&u, s) + 1e-12);
    }

    #[test]
    fn free_flow_preserves_every_sobolev_norm(u in state(16), t in -3.0..3.0f64, s in -1.0..1.0f64) {
        let v = linear_substep(&u, t);
        let (a, b) = (sobolev_norm(&u, s), sobolev_norm(&v, s));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn tail_bound_decreases_in_lambda(c in 0.01..2.0f64, cs in 1.0..10.0f64, l1 in 0.01..5.0f64, dl in 0.0..5.0f64) {
        let a = tail_probability_bound(l1, c, cs).unwrap();
        let b = tail_probability_bound(l1 + dl, c, cs).unwrap();
        prop_assert!(b <= a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn strichartz_ratio_is_scale_invariant(seed in 0u64..1000, scale in 1e-3..50.0f64) {
        let quad = RadialQuadrature::for_modes(8).unwrap();
        let f = sample_gaussian(8, seed, 0);
        let a = strichartz_ratio(&f, 4.0, 0.5, &quad, 101).unwrap();
        let b = strichartz_ratio(&f.scale(scale), 4.0, 0.5, &quad, 101).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn nonlinear_flow_is_time_reversible(seed in 0u64..1000) {
        let quad = Arc::new(RadialQuadrature::for_modes(8).unwrap());
        let params = FlowParams::new(1.0, 8, 1e-2, quad).unwrap();
        let u = sample_gaussian(8, seed, 0);
        let back = flow(&flow(&u, &params, 0.5).unwrap(), &params, -0.5).unwrap();
        prop_assert!(back.sub(&u).unwrap().coeffs().iter().all(|c| c.norm() < 1e-10));
    }
}
