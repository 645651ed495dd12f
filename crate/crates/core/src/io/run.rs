//! Experiment orchestration: dispatch, artifacts and pass/fail bookkeeping.
//!
//! Every run directory receives one or more CSV tables, `summary.json`
//! (checks, config echo, metrics) and `manifest.json` (adds version, thread
//! count and wall-clock). Everything except the manifest is a pure function of
//! the config, so repeated runs produce identical bytes.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Experiment, SimConfig};
use super::format::{fmt_f64, Table};
use crate::dynamics::{divergence_probe, evolve, linear_substep, picard_solve, FlowParams, Observers, PicardOptions};
use crate::error::{Error, Result};
use crate::gibbs::{sample_ensemble, sample_gaussian, TailParameter};
use crate::spectral::{analyze, eval_basis, sobolev_norm, synthesize, RadialQuadrature, SpectralState};
use crate::verify::{
    convergence_experiment, default_checkpoints, exp_moment_check, growth_experiment, invariance_test,
    strichartz_probe, strichartz_ratio, tail_check, GrowthOptions, InvarianceOptions, InvarianceReport,
};

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "RADWAVE_OUT";
/// Output root used when neither `--out` nor the environment says otherwise.
pub const DEFAULT_OUTPUT_ROOT: &str = "runs";

/// One pass/fail flag with the number it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold: hi,
            pass: value >= lo && value <= hi,
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value: if pass { 1.0 } else { 0.0 },
            threshold: 1.0,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub experiment: Experiment,
    pub out_dir: PathBuf,
    pub checks: Vec<Check>,
    pub files: Vec<String>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect()
    }

    /// 0 iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// `--out` wins, then `output_dir` from the config, then
/// `$RADWAVE_OUT/<experiment>-<UTC timestamp>` (root defaults to `runs`).
pub fn resolve_output_dir(cli_out: Option<&Path>, config: &SimConfig) -> PathBuf {
    if let Some(dir) = cli_out {
        return dir.to_path_buf();
    }
    if let Some(dir) = &config.output_dir {
        return dir.clone();
    }
    let root = std::env::var_os(OUTPUT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT));
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
    root.join(format!("{}-{stamp}", config.experiment))
}

/// Runs `config` on a pool of `threads` workers (`0` = one per core).
pub fn run_with_threads(config: &SimConfig, out_dir: &Path, threads: usize) -> Result<RunOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| run(config, out_dir))
}

/// Runs the configured experiment and writes its artifacts into `out_dir`.
pub fn run(config: &SimConfig, out_dir: &Path) -> Result<RunOutcome> {
    config.validate()?;
    let started = Instant::now();
    let started_at = chrono::Utc::now().to_rfc3339();
    std::fs::create_dir_all(out_dir)?;
    let mut art = Artifacts::new(out_dir);
    let metrics = match config.experiment {
        Experiment::Sample => run_sample(config, &mut art)?,
        Experiment::Evolve => run_evolve(config, &mut art)?,
        Experiment::Invariance => run_invariance(config, &mut art)?,
        Experiment::Growth => run_growth(config, &mut art)?,
        Experiment::Converge => run_converge(config, &mut art)?,
        Experiment::Strichartz => run_strichartz(config, &mut art)?,
        Experiment::Validate => run_validate(config, &mut art)?,
    };
    let outcome = RunOutcome {
        experiment: config.experiment,
        out_dir: out_dir.to_path_buf(),
        checks: art.checks.clone(),
        files: art.files.clone(),
    };
    let summary = json!({
        "experiment": config.experiment,
        "passed": outcome.passed(),
        "failures": outcome.failures(),
        "master_seed": config.master_seed,
        "checks": outcome.checks,
        "metrics": metrics,
        "config": config,
    });
    art.json("summary.json", &summary)?;
    let manifest = json!({
        "experiment": config.experiment,
        "master_seed": config.master_seed,
        "config": config,
        "config_text": config.to_text(),
        "crate": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "threads": rayon::current_num_threads(),
        "started_at": started_at,
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "files": art.files,
    });
    art.json("manifest.json", &manifest)?;
    Ok(RunOutcome {
        files: art.files,
        ..outcome
    })
}

struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
    checks: Vec<Check>,
}

impl Artifacts {
    fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn csv(&mut self, name: &str, table: &Table) -> Result<()> {
        table.write_path(&self.dir.join(name))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(self.dir.join(name), text)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }
}

fn quadrature(config: &SimConfig, grid_points: usize) -> Result<Arc<RadialQuadrature>> {
    Ok(Arc::new(RadialQuadrature::new(config.quadrature_kind()?, grid_points)?))
}

fn flow_params(config: &SimConfig) -> Result<FlowParams> {
    let quad = quadrature(config, config.grid_points)?;
    Ok(FlowParams::new(config.alpha, config.n_modes, config.dt, quad)?.with_scheme(config.scheme_kind()?))
}

fn state_table(state: &SpectralState) -> Table {
    let mut t = Table::new(["mode", "re", "im"]);
    for (i, c) in state.coeffs().iter().enumerate() {
        t.push(vec![(i + 1).to_string(), fmt_f64(c.re), fmt_f64(c.im)]);
    }
    t
}

fn run_sample(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let quad = quadrature(config, config.grid_points)?;
    let ens = sample_ensemble(
        config.n_modes,
        config.n_samples,
        config.alpha,
        config.master_seed,
        &quad,
    )?;
    art.csv("ensemble.csv", &ens.to_table())?;
    let max_lw = ens.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    art.check(Check::at_most("log_weights_nonpositive", max_lw, 0.0));
    let ess = ens.effective_sample_size();
    art.check(Check::at_least(
        "effective_sample_size_positive",
        ess,
        f64::MIN_POSITIVE,
    ));

    let lambda_grid: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
    let mut tails = Table::new(["s", "lambda", "survival", "bound"]);
    let mut moments = Table::new(["s", "c", "estimate", "standard_error", "exact"]);
    let mut per_s = Vec::new();
    for &s in &config.sobolev_indices {
        let t = TailParameter::new(config.tail_c, s)?;
        let rep = tail_check(&ens, &t, &lambda_grid)?;
        for r in &rep.rows {
            tails.push_floats(&[s, r.lambda, r.survival, r.bound]);
        }
        art.check(Check::flag(format!("tail_monotone_s{s}"), rep.monotone()));
        art.check(Check::flag(format!("tail_dominated_s{s}"), rep.dominated()));
        let m = exp_moment_check(&ens, &t, 3.0)?;
        moments.push_floats(&[s, m.c, m.estimate, m.standard_error, m.exact]);
        if ens.len() >= 2 {
            art.check(Check::at_most(
                format!("exp_moment_s{s}"),
                (m.estimate - m.exact).abs(),
                3.0 * m.standard_error,
            ));
        }
        per_s.push(json!({ "s": s, "c_s": rep.c_s, "slope": rep.slope }));
    }
    art.csv("tails.csv", &tails)?;
    art.csv("moments.csv", &moments)?;
    Ok(json!({ "effective_sample_size": ess, "tails": per_s }))
}

fn run_evolve(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let params = flow_params(config)?;
    let u0 = sample_gaussian(config.n_modes, config.master_seed, 0);
    let mut indices = vec![config.sigma];
    indices.extend(config.sobolev_indices.iter().filter(|&&s| s != config.sigma));
    let observers = Observers::every(config.record_every)
        .with_sobolev(&indices)
        .with_modes(&config.modes);
    let (last, rec) = evolve(&u0, &params, config.horizon, &observers)?;
    art.csv("trajectory.csv", &rec.to_table())?;
    art.csv("initial_state.csv", &state_table(&u0))?;
    art.csv("final_state.csv", &state_table(&last))?;
    let drift = rec.max_relative_energy_drift();
    art.check(Check::at_most(
        "energy_drift",
        drift,
        crate::verify::growth::DRIFT_GUARD,
    ));
    Ok(json!({ "max_relative_energy_drift": drift, "records": rec.len() }))
}

fn invariance_rows(table: &mut Table, flow: &str, rep: &InvarianceReport) {
    for c in &rep.comparisons {
        let mut row = vec![flow.to_string(), c.name.clone()];
        row.extend(
            [
                c.mean_initial,
                c.se_initial,
                c.mean_final,
                c.se_final,
                c.mean_diff,
                c.combined_se,
                c.ks,
                c.ks_threshold,
            ]
            .map(fmt_f64),
        );
        row.extend([c.mean_pass, c.ks_pass, c.pass].map(|b| b.to_string()));
        table.push(row);
    }
}

fn invariance_checks(art: &mut Artifacts, flow: &str, rep: &InvarianceReport) {
    for c in &rep.comparisons {
        art.check(Check::at_most(
            format!("{flow}_mean_{}", c.name),
            c.mean_diff.abs(),
            3.0 * c.combined_se,
        ));
        art.check(Check::at_most(format!("{flow}_ks_{}", c.name), c.ks, c.ks_threshold));
    }
}

fn run_invariance(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let params = flow_params(config)?;
    let observables = config.observable_set()?;
    let ens = sample_ensemble(
        config.n_modes,
        config.n_samples,
        config.alpha,
        config.master_seed,
        &params.quad,
    )?;
    let opts = InvarianceOptions {
        bootstrap_seed: config.master_seed,
        ..InvarianceOptions::default()
    };
    let mut table = Table::new([
        "flow",
        "observable",
        "mean_initial",
        "se_initial",
        "mean_final",
        "se_final",
        "mean_diff",
        "combined_se",
        "ks",
        "ks_threshold",
        "mean_pass",
        "ks_pass",
        "pass",
    ]);
    let rep = invariance_test(&ens, config.horizon, &params, &observables, &opts)?;
    invariance_rows(&mut table, "gibbs", &rep);
    invariance_checks(art, "gibbs", &rep);
    let mut metrics = json!({ "gibbs": rep });
    if config.control {
        let linear = params.clone().linear_only();
        let ctrl = invariance_test(&ens.unweighted(), config.horizon, &linear, &observables, &opts)?;
        invariance_rows(&mut table, "linear_control", &ctrl);
        invariance_checks(art, "linear_control", &ctrl);
        metrics["linear_control"] = serde_json::to_value(&ctrl)?;
    }
    art.csv("invariance.csv", &table)?;
    Ok(metrics)
}

fn run_growth(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let params = flow_params(config)?;
    let ens = sample_ensemble(
        config.n_modes,
        config.n_samples,
        config.alpha,
        config.master_seed,
        &params.quad,
    )?;
    let checkpoints = if config.checkpoints > 0 {
        (0..=config.checkpoints)
            .map(|k| config.horizon * k as f64 / config.checkpoints as f64)
            .collect()
    } else {
        default_checkpoints(config.horizon, config.dt)
    };
    let opts = GrowthOptions {
        sigma: config.sigma,
        ..GrowthOptions::default()
    };
    match growth_experiment(&ens, &checkpoints, &params, &opts) {
        Ok(rep) => {
            art.csv("growth.csv", &rep.to_table())?;
            art.check(Check::at_most("envelope_ratio", rep.envelope_ratio(), 3.0));
            art.check(Check::at_most(
                "energy_drift_guard",
                rep.max_energy_drift,
                opts.drift_guard,
            ));
            Ok(json!({ "envelope_ratio": rep.envelope_ratio(), "report": rep }))
        }
        Err(Error::EnergyDrift { drift, limit }) => {
            art.check(Check::at_most("energy_drift_guard", drift, limit));
            Ok(json!({ "aborted": "energy drift guard" }))
        }
        Err(e) => Err(e),
    }
}

fn run_converge(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let params = flow_params(config)?;
    let u0 = sample_gaussian(config.n_modes, config.master_seed, 0);
    let checkpoints = if config.checkpoints > 0 { config.checkpoints } else { 20 };
    let rep = convergence_experiment(
        &u0,
        &config.truncations,
        config.horizon,
        &params,
        config.sigma,
        checkpoints,
    )?;
    art.csv("converge.csv", &rep.to_table())?;
    for w in rep.rows.windows(2) {
        art.check(Check::at_most(
            format!("nonincreasing_n{}", w[1].n_modes),
            w[1].sup_discrepancy / w[0].sup_discrepancy,
            1.5,
        ));
    }
    Ok(serde_json::to_value(&rep)?)
}

fn run_strichartz(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let mut table = Table::new(["n_modes", "sample", "ratio", "running_sup"]);
    let mut sups = Vec::new();
    let mut scale_err: f64 = 0.0;
    for factor in [1, 2] {
        let n = config.n_modes * factor;
        let quad = quadrature(config, config.grid_points * factor)?;
        let rep = strichartz_probe(
            n,
            config.strichartz_p,
            config.n_samples,
            config.horizon,
            config.master_seed,
            &quad,
            config.time_mesh,
        )?;
        for (i, (r, s)) in rep.ratios.iter().zip(&rep.running_sup).enumerate() {
            table.push(vec![n.to_string(), i.to_string(), fmt_f64(*r), fmt_f64(*s)]);
        }
        for (i, r) in rep.ratios.iter().enumerate().take(10) {
            let f = sample_gaussian(n, config.master_seed, i as u64).scale(3.7);
            let scaled = strichartz_ratio(&f, config.strichartz_p, config.horizon, &quad, config.time_mesh)?;
            scale_err = scale_err.max((scaled - r).abs() / r);
        }
        sups.push(rep.sup());
    }
    art.csv("strichartz.csv", &table)?;
    let growth = sups[1] / sups[0];
    art.check(Check::at_most("sup_growth_under_doubling", growth, 1.2));
    art.check(Check::at_most("scale_invariance", scale_err, 1e-10));
    Ok(json!({ "sup": sups, "sup_ratio": growth, "scale_error": scale_err }))
}

/// Canonical invariant suite; the config contributes only the seed.
fn run_validate(config: &SimConfig, art: &mut Artifacts) -> Result<Value> {
    let checks = validation_suite(config.master_seed)?;
    let mut table = Table::new(["check", "value", "threshold", "pass"]);
    for c in checks {
        table.push(vec![
            c.name.clone(),
            fmt_f64(c.value),
            fmt_f64(c.threshold),
            c.pass.to_string(),
        ]);
        art.check(c);
    }
    art.csv("validate.csv", &table)?;
    Ok(json!({}))
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Orthonormality, transform round-trip, linear periodicity and isometry,
/// energy conservation and its order, Liouville divergence, Picard agreement.
pub fn validation_suite(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let quad = RadialQuadrature::uniform(256)?;
    let table: Vec<Vec<f64>> = (1..=32)
        .map(|n| quad.nodes().iter().map(|&r| eval_basis(n, r)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut gram_err: f64 = 0.0;
    for (i, ei) in table.iter().enumerate() {
        for (j, ej) in table.iter().enumerate() {
            let v: f64 = quad.weights().iter().zip(ei).zip(ej).map(|((w, a), b)| w * a * b).sum();
            gram_err = gram_err.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    out.push(Check::at_most("orthonormality", gram_err, 1e-12));

    let quad = RadialQuadrature::uniform(128)?;
    let u = sample_gaussian(16, seed, 0);
    let back = analyze(&synthesize(&u, &quad)?, &quad, 16)?;
    out.push(Check::at_most(
        "round_trip",
        max_abs_diff(back.coeffs(), u.coeffs()),
        1e-12,
    ));

    let u = sample_gaussian(32, seed, 1);
    let scale = u.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let period = max_abs_diff(linear_substep(&u, 2.0).coeffs(), u.coeffs()) / scale;
    out.push(Check::at_most("linear_period", period, 1e-13));
    for s in [0.0, 0.25, 1.0] {
        let a = sobolev_norm(&u, s);
        let b = sobolev_norm(&linear_substep(&u, 0.7), s);
        out.push(Check::at_most(
            format!("linear_isometry_s{s}"),
            (a - b).abs() / a,
            1e-13,
        ));
    }

    let params = FlowParams::with_default_grid(1.0, 32, 1e-3)?;
    let (mut worst, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for i in 0..10 {
        let u = sample_gaussian(32, seed, 100 + i);
        let (_, coarse) = evolve(&u, &params, 1.0, &Observers::every(1))?;
        let (_, fine) = evolve(&u, &params.clone().with_dt(5e-4), 1.0, &Observers::every(2))?;
        let d = coarse.max_relative_energy_drift();
        let ratio = d / fine.max_relative_energy_drift();
        worst = worst.max(d);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    out.push(Check::at_most("energy_drift", worst, 1e-5));
    out.push(Check::within("energy_order_min_ratio", lo, 3.5, 4.5));
    out.push(Check::within("energy_order_max_ratio", hi, 3.5, 4.5));

    let quad = RadialQuadrature::for_modes(8)?;
    let mut div: f64 = 0.0;
    for i in 0..100 {
        let u = sample_gaussian(8, seed, 1000 + i);
        div = div.max(divergence_probe(&u, 1.0, &quad, 1e-5)?.relative());
    }
    out.push(Check::at_most("liouville_divergence", div, 1e-6));

    let params = FlowParams::with_default_grid(1.0, 16, 1e-4)?;
    let u0 = sample_gaussian(16, seed, 2000);
    let sol = picard_solve(&u0, 0.05, &params, &PicardOptions::default())?;
    let split = crate::dynamics::flow(&u0, &params, 0.05)?;
    out.push(Check::at_most(
        "picard_vs_splitting",
        sobolev_norm(&sol.state.sub(&split)?, 0.25),
        1e-6,
    ));
    let min_ratio = sol.contraction_ratios().into_iter().fold(f64::INFINITY, f64::min);
    out.push(Check::at_least("picard_contraction", min_ratio, 2.0));
    Ok(out)
}
