//! Exponential moments and tail bounds of the Gaussian measure.
//!
//! `cargo run --release --example gaussian_tails`

use radwave::gibbs::{exp_moment_product_raw, sample_ensemble, MomentSign, TailParameter};
use radwave::spectral::RadialQuadrature;
use radwave::verify::{exp_moment_check, tail_check};

fn main() -> radwave::Result<()> {
    let quad = RadialQuadrature::for_modes(16)?;
    let ens = sample_ensemble(16, 100_000, 1.0, 9, &quad)?;

    for s in [0.0, 0.25, 0.45] {
        for c in [0.1, 0.5] {
            let t = TailParameter::new(c, s)?;
            let m = exp_moment_check(&ens, &t, 3.0)?;
            println!(
                "s = {s:<4} c = {c}: MC {:.5} +- {:.5}, product {:.5}",
                m.estimate, m.standard_error, m.exact
            );
        }
    }

    let t = TailParameter::new(0.5, 0.25)?;
    let grid: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
    let rep = tail_check(&ens, &t, &grid)?;
    println!(
        "\nC_s = {:.4}, fitted slope of ln S vs Lambda^2: {:?}",
        rep.c_s, rep.slope
    );
    print!("{}", rep.to_table().to_csv_string());

    println!("\nminus-sign product at s = 1/2:");
    for k in [2, 4, 6, 8, 10] {
        let n = 1usize << k;
        println!(
            "  N = {n:<5} {:.6}",
            exp_moment_product_raw(n, 0.5, 0.5, MomentSign::Minus)?
        );
    }
    Ok(())
}
