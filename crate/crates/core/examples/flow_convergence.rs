//! Truncated flows converging to a higher-resolution reference.
//!
//! `cargo run --release --example flow_convergence`

use std::sync::Arc;

use radwave::dynamics::FlowParams;
use radwave::gibbs::sample_gaussian;
use radwave::spectral::RadialQuadrature;
use radwave::verify::convergence_experiment;

fn main() -> radwave::Result<()> {
    let n_ref = 64;
    let quad = Arc::new(RadialQuadrature::for_modes(n_ref)?);
    let params = FlowParams::new(1.0, n_ref, 1e-3, quad)?;
    let u0 = sample_gaussian(n_ref, 11, 0);
    let rep = convergence_experiment(&u0, &[8, 16, 32], 1.0, &params, 0.25, 20)?;
    println!("{:>4} {:>14} {:>14}", "N", "sup_t gap", "gap at t = 0");
    for r in &rep.rows {
        println!(
            "{:>4} {:>14.6e} {:>14.6e}",
            r.n_modes, r.sup_discrepancy, r.initial_discrepancy
        );
    }
    println!("nonincreasing within 1.5x: {}", rep.nonincreasing_within(1.5));
    Ok(())
}
