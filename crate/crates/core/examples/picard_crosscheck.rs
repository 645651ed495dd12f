//! Duhamel/Picard fixed point against the splitting integrator.
//!
//! `cargo run --release --example picard_crosscheck`

use radwave::dynamics::{flow, picard_solve, FlowParams, PicardOptions};
use radwave::gibbs::sample_gaussian;
use radwave::spectral::sobolev_norm;

fn main() -> radwave::Result<()> {
    let params = FlowParams::with_default_grid(1.0, 16, 1e-4)?;
    let u0 = sample_gaussian(16, 10, 0);
    let opts = PicardOptions::default();
    println!(
        "||u0||_H^{} = {:.4}, local time bound {:.4}",
        opts.sigma,
        sobolev_norm(&u0, opts.sigma),
        opts.time_limit(sobolev_norm(&u0, opts.sigma))
    );

    for horizon in [0.01, 0.025, 0.05] {
        let sol = picard_solve(&u0, horizon, &params, &opts)?;
        let split = flow(&u0, &params, horizon)?;
        let gap = sobolev_norm(&sol.state.sub(&split)?, 0.25);
        println!("T = {horizon:<6} |picard - splitting|_H^0.25 = {gap:.3e}");
        let diffs: Vec<String> = sol.successive_diffs.iter().map(|d| format!("{d:.1e}")).collect();
        println!("    successive differences: {}", diffs.join(" "));
    }

    match picard_solve(&u0, 1.0, &params, &opts) {
        Err(e) => println!("T = 1 rejected: {e}"),
        Ok(_) => println!("T = 1 accepted"),
    }
    Ok(())
}
