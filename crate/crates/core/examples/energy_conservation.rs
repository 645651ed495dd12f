//! Strang splitting: energy drift and its second-order scaling.
//!
//! `cargo run --release --example energy_conservation`

use radwave::dynamics::{evolve, FlowParams, Observers, Scheme};
use radwave::gibbs::sample_gaussian;

fn main() -> radwave::Result<()> {
    let u0 = sample_gaussian(32, 17, 0);
    let base = FlowParams::with_default_grid(1.0, 32, 1e-3)?;
    println!("{:>8} {:>10} {:>14}", "scheme", "dt", "max drift");
    for scheme in [Scheme::Strang, Scheme::Lie] {
        let mut prev: Option<f64> = None;
        for dt in [4e-3, 2e-3, 1e-3] {
            let p = base.clone().with_scheme(scheme).with_dt(dt);
            let (_, rec) = evolve(&u0, &p, 1.0, &Observers::every(1))?;
            let d = rec.max_relative_energy_drift();
            let ratio = prev.map(|q| format!("  ratio {:.2}", q / d)).unwrap_or_default();
            println!("{:>8} {dt:>10.0e} {d:>14.3e}{ratio}", format!("{scheme:?}"));
            prev = Some(d);
        }
    }

    let p = base.with_dt(1e-3);
    let (last, rec) = evolve(
        &u0,
        &p,
        1.0,
        &Observers::every(100).with_sobolev(&[0.25]).with_modes(&[1]),
    )?;
    let (back, _) = evolve(&last, &p, -1.0, &Observers::endpoints())?;
    let err = back.sub(&u0)?.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    println!("time reversal error after T = 1 and back: {err:.3e}");
    print!("{}", rec.to_table().to_csv_string());
    Ok(())
}
