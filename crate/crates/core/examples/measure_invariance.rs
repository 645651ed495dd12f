//! Weighted ensemble pushed forward by the flow, with the linear control.
//!
//! `cargo run --release --example measure_invariance -- [n_samples]`

use radwave::dynamics::FlowParams;
use radwave::gibbs::sample_ensemble;
use radwave::verify::{invariance_test, InvarianceOptions, InvarianceReport, Observable};

fn show(label: &str, rep: &InvarianceReport) {
    println!("{label} (ESS {:.0}):", rep.effective_sample_size);
    for c in &rep.comparisons {
        println!(
            "  {:<13} mean {:+.2e} (3 SE {:.2e})  KS {:.4} (thr {:.4})  {}",
            c.name,
            c.mean_diff,
            3.0 * c.combined_se,
            c.ks,
            c.ks_threshold,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
}

fn main() -> radwave::Result<()> {
    let n_samples: usize = std::env::args()
        .nth(1)
        .map_or(Ok(4000), |s| s.parse())
        .expect("n_samples");
    let params = FlowParams::with_default_grid(1.0, 8, 1e-3)?;
    let ens = sample_ensemble(8, n_samples, 1.0, 2024, &params.quad)?;
    let obs = Observable::standard_set();
    let opts = InvarianceOptions::default();

    show("Gibbs flow", &invariance_test(&ens, 1.0, &params, &obs, &opts)?);
    let linear = params.clone().linear_only();
    show(
        "linear flow, unit weights",
        &invariance_test(&ens.unweighted(), 1.0, &linear, &obs, &opts)?,
    );
    Ok(())
}
