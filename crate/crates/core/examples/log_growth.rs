//! Sobolev norm quantiles over long times against `(1 + log(1 + t))^{1/2}`.
//!
//! `cargo run --release --example log_growth -- [horizon] [n_samples]`

use radwave::dynamics::FlowParams;
use radwave::gibbs::sample_ensemble;
use radwave::verify::{default_checkpoints, growth_experiment, GrowthOptions};

fn main() -> radwave::Result<()> {
    let mut args = std::env::args().skip(1);
    let horizon: f64 = args.next().map_or(Ok(100.0), |s| s.parse()).expect("horizon");
    let n_samples: usize = args.next().map_or(Ok(200), |s| s.parse()).expect("n_samples");

    let params = FlowParams::with_default_grid(1.0, 16, 1e-2)?;
    let ens = sample_ensemble(16, n_samples, 1.0, 7, &params.quad)?;
    let rep = growth_experiment(
        &ens,
        &default_checkpoints(horizon, params.dt),
        &params,
        &GrowthOptions::default(),
    )?;
    print!("{}", rep.to_table().to_csv_string());
    println!("max/min of normalized median: {:.3}", rep.envelope_ratio());
    println!("max relative energy drift: {:.3e}", rep.max_energy_drift);
    Ok(())
}
