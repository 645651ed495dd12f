//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use radwave::dynamics::{
    divergence_probe, evolve, flow, linear_substep, picard_solve, FlowParams, Observers, PicardOptions,
};
use radwave::gibbs::{sample_ensemble, sample_gaussian, TailParameter};
use radwave::io::{run_with_threads, Experiment, SimConfig};
use radwave::spectral::{analyze, eval_basis, sobolev_norm, synthesize, RadialQuadrature};
use radwave::verify::{
    convergence_experiment, default_checkpoints, exp_moment_check, growth_experiment, invariance_test,
    strichartz_probe, strichartz_ratio, tail_check, GrowthOptions, InvarianceOptions, Observable,
};

type Outcome = Result<(bool, String), radwave::Error>;
type Criterion = (&'static str, fn() -> Outcome);

/// Same seed as `configs/invariance.conf`.
const INVARIANCE_SEED: u64 = 2024;

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn spectral() -> Outcome {
    let start = Instant::now();
    let quad = RadialQuadrature::uniform(256)?;
    let basis: Vec<Vec<f64>> = (1..=32)
        .map(|n| quad.nodes().iter().map(|&r| eval_basis(n, r)).collect())
        .collect::<Result<_, _>>()?;
    let mut gram: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let v: f64 = quad.weights().iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum();
            gram = gram.max((v - f64::from(u8::from(i == j))).abs());
        }
    }
    let quad = RadialQuadrature::uniform(128)?;
    let mut round: f64 = 0.0;
    for i in 0..20 {
        let u = sample_gaussian(16, 1, i);
        let back = analyze(&synthesize(&u, &quad)?, &quad, 16)?;
        round = round.max(back.sub(&u)?.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    let t = start.elapsed();
    Ok((
        gram <= 1e-12 && round <= 1e-12 && within(t, 1),
        format!("gram {gram:.2e}, round-trip {round:.2e}, {:.3}s", t.as_secs_f64()),
    ))
}

fn linear_flow() -> Outcome {
    let (mut period, mut iso): (f64, f64) = (0.0, 0.0);
    for i in 0..20 {
        let u = sample_gaussian(32, 2, i);
        let scale = u.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let back = linear_substep(&u, 2.0);
        period = period.max(back.sub(&u)?.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max) / scale);
        for t in [0.3, 1.0, 7.77] {
            let v = linear_substep(&u, t);
            for s in [0.0, 0.25, 1.0] {
                let a = sobolev_norm(&u, s);
                iso = iso.max((sobolev_norm(&v, s) - a).abs() / a);
            }
        }
    }
    Ok((
        period <= 1e-13 && iso <= 1e-13,
        format!("period {period:.2e}, isometry {iso:.2e}"),
    ))
}

fn energy() -> Outcome {
    let start = Instant::now();
    let params = FlowParams::with_default_grid(1.0, 32, 1e-3)?;
    let half = params.clone().with_dt(5e-4);
    let (mut worst, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for i in 0..10 {
        let u = sample_gaussian(32, 3, i);
        let (_, a) = evolve(&u, &params, 1.0, &Observers::every(1))?;
        let (_, b) = evolve(&u, &half, 1.0, &Observers::every(2))?;
        let d = a.max_relative_energy_drift();
        let r = d / b.max_relative_energy_drift();
        worst = worst.max(d);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let t = start.elapsed();
    Ok((
        worst <= 1e-5 && lo >= 3.5 && hi <= 4.5 && within(t, 30),
        format!(
            "max drift {worst:.2e}, dt ratio in [{lo:.3}, {hi:.3}], {:.1}s",
            t.as_secs_f64()
        ),
    ))
}

fn liouville() -> Outcome {
    let quad = RadialQuadrature::for_modes(8)?;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let u = sample_gaussian(8, 4, i);
        worst = worst.max(divergence_probe(&u, 1.0, &quad, 1e-5)?.relative());
    }
    Ok((
        worst <= 1e-6,
        format!("max relative divergence {worst:.2e} over 100 points"),
    ))
}

fn picard() -> Outcome {
    let params = FlowParams::with_default_grid(1.0, 16, 1e-4)?;
    let opts = PicardOptions::default();
    let (mut gap, mut ratio): (f64, f64) = (0.0, f64::INFINITY);
    for i in 0..5 {
        let u0 = sample_gaussian(16, 5, i);
        let sol = picard_solve(&u0, 0.05, &params, &opts)?;
        let split = flow(&u0, &params, 0.05)?;
        gap = gap.max(sobolev_norm(&sol.state.sub(&split)?, 0.25));
        ratio = sol.contraction_ratios().into_iter().fold(ratio, f64::min);
    }
    Ok((
        gap <= 1e-6 && ratio >= 2.0 && opts.iterations == 8,
        format!("max H^0.25 gap {gap:.2e}, min contraction ratio {ratio:.1}"),
    ))
}

fn gaussian_tails() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_z: f64 = 0.0;
    let mut dominated = true;
    let mut slope = 0.0;
    for n in [8, 16] {
        let quad = RadialQuadrature::for_modes(n)?;
        let ens = sample_ensemble(n, 100_000, 1.0, 6, &quad)?;
        for s in [0.0, 0.25, 0.45] {
            for c in [0.1, 0.5] {
                let Ok(t) = TailParameter::new(c, s) else { continue };
                let m = exp_moment_check(&ens, &t, 3.0)?;
                ok &= m.pass;
                worst_z = worst_z.max((m.estimate - m.exact).abs() / m.standard_error);
            }
        }
        if n == 16 {
            let t = TailParameter::new(0.5, 0.25)?;
            let grid: Vec<f64> = (0..=12).map(|i| 1.0 + 0.25 * i as f64).collect();
            let rep = tail_check(&ens, &t, &grid)?;
            dominated = rep.dominated() && rep.monotone();
            slope = rep.slope.unwrap_or(f64::NAN);
        }
    }
    let t = start.elapsed();
    Ok((
        ok && dominated && slope <= -0.3 && within(t, 120),
        format!(
            "worst |MC - product| = {worst_z:.2} SE, tail dominated {dominated}, slope {slope:.2}, {:.1}s",
            t.as_secs_f64()
        ),
    ))
}

fn invariance() -> Outcome {
    let start = Instant::now();
    let params = FlowParams::with_default_grid(1.0, 8, 1e-3)?;
    let ens = sample_ensemble(8, 20_000, 1.0, INVARIANCE_SEED, &params.quad)?;
    let obs = [
        Observable::L2Squared,
        Observable::RealPotential,
        Observable::Sobolev(0.25),
        Observable::ReCoeff(1),
        Observable::ModeEnergy(2),
    ];
    let opts = InvarianceOptions {
        bootstrap_seed: INVARIANCE_SEED,
        ..InvarianceOptions::default()
    };
    let gibbs = invariance_test(&ens, 1.0, &params, &obs, &opts)?;
    let control = invariance_test(&ens.unweighted(), 1.0, &params.clone().linear_only(), &obs, &opts)?;
    let t = start.elapsed();
    let worst = gibbs
        .comparisons
        .iter()
        .chain(&control.comparisons)
        .map(|c| (c.mean_diff.abs() / c.combined_se).max(3.0 * c.ks / c.ks_threshold))
        .fold(0.0, f64::max);
    Ok((
        gibbs.passed() && control.passed() && within(t, 600),
        format!(
            "seed {INVARIANCE_SEED}, worst statistic {worst:.2} of 3 (mean in SE, KS scaled), {:.1}s",
            t.as_secs_f64()
        ),
    ))
}

fn convergence() -> Outcome {
    let quad = Arc::new(RadialQuadrature::for_modes(64)?);
    let params = FlowParams::new(1.0, 64, 1e-3, quad)?;
    let mut ok = true;
    let mut detail = Vec::new();
    for i in 0..3 {
        let u0 = sample_gaussian(64, 8, i);
        let rep = convergence_experiment(&u0, &[8, 16, 32], 1.0, &params, 0.25, 20)?;
        ok &= rep.nonincreasing_within(1.5);
        detail.push(
            rep.rows
                .iter()
                .map(|r| format!("{:.3}", r.sup_discrepancy))
                .collect::<Vec<_>>()
                .join("/"),
        );
    }
    Ok((ok, format!("sup gaps N = 8/16/32: {}", detail.join(", "))))
}

fn growth() -> Outcome {
    let start = Instant::now();
    let params = FlowParams::with_default_grid(1.0, 16, 1e-2)?;
    let ens = sample_ensemble(16, 200, 1.0, 9, &params.quad)?;
    let rep = growth_experiment(
        &ens,
        &default_checkpoints(100.0, 1e-2),
        &params,
        &GrowthOptions::default(),
    );
    let t = start.elapsed().as_secs_f64();
    Ok(match rep {
        Ok(rep) => (
            rep.envelope_ratio() <= 3.0 && rep.max_energy_drift <= 1e-2,
            format!(
                "median-q max/min {:.3}, max drift {:.2e}, {t:.1}s",
                rep.envelope_ratio(),
                rep.max_energy_drift
            ),
        ),
        Err(e) => (false, format!("guard tripped: {e}")),
    })
}

fn strichartz() -> Outcome {
    let mut sups = Vec::new();
    let mut scale: f64 = 0.0;
    for n in [16, 32] {
        let quad = RadialQuadrature::for_modes(n)?;
        let rep = strichartz_probe(n, 4.0, 100, 1.0, 10, &quad, 401)?;
        for (i, r) in rep.ratios.iter().enumerate() {
            let f = sample_gaussian(n, 10, i as u64);
            for lambda in [1e-3, 17.0] {
                let v = strichartz_ratio(&f.scale(lambda), 4.0, 1.0, &quad, 401)?;
                scale = scale.max((v - r).abs() / r);
            }
        }
        sups.push(rep.sup());
    }
    let growth = sups[1] / sups[0];
    Ok((
        growth <= 1.2 && scale <= 1e-10,
        format!(
            "sup {:.4} -> {:.4} (x{growth:.3}), scale error {scale:.1e}",
            sups[0], sups[1]
        ),
    ))
}

fn read_outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("run directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.file_name().is_some_and(|n| n != "manifest.json"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(&p).expect("readable"))
        })
        .collect();
    files.sort();
    files
}

fn reproducibility() -> Outcome {
    let root = tempfile::tempdir()?;
    let mut same = true;
    let mut compared = 0;
    for e in Experiment::ALL {
        let config = SimConfig {
            experiment: e,
            n_modes: 8,
            grid_points: 64,
            n_samples: 300,
            dt: 1e-2,
            horizon: 0.5,
            truncations: vec![2, 4],
            sobolev_indices: vec![0.0, 0.25],
            time_mesh: 41,
            master_seed: 99,
            ..SimConfig::default()
        };
        let mut outputs = Vec::new();
        for (k, threads) in [1, 1, 3].into_iter().enumerate() {
            let dir = root.path().join(format!("{e}-{k}"));
            run_with_threads(&config, &dir, threads)?;
            outputs.push(read_outputs(&dir));
        }
        same &= outputs.windows(2).all(|w| w[0] == w[1]);
        compared += outputs[0].len();
    }
    Ok((
        same,
        format!("{compared} files x 3 runs (threads 1, 1, 3) over 7 experiments"),
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("spectral correctness", spectral),
        ("linear flow", linear_flow),
        ("energy conservation", energy),
        ("Liouville divergence", liouville),
        ("solver cross-validation", picard),
        ("Gaussian moments and tails", gaussian_tails),
        ("measure invariance", invariance),
        ("flow convergence", convergence),
        ("log-growth envelope", growth),
        ("Strichartz probe", strichartz),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!("{} [{:>2}] {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
