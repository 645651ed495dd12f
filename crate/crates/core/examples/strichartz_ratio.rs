//! Empirical Strichartz constant for random data.
//!
//! `cargo run --release --example strichartz_ratio`

use num_complex::Complex64;
use radwave::spectral::{RadialQuadrature, SpectralState};
use radwave::verify::{strichartz_probe, strichartz_ratio};

fn main() -> radwave::Result<()> {
    let p = 4.0;
    for n in [8, 16, 32] {
        let quad = RadialQuadrature::for_modes(n)?;
        let rep = strichartz_probe(n, p, 100, 1.0, 3, &quad, 401)?;
        let mean = rep.ratios.iter().sum::<f64>() / rep.ratios.len() as f64;
        println!("N = {n:<3} q = {}: mean ratio {mean:.4}, sup {:.4}", rep.q, rep.sup());
    }

    let quad = RadialQuadrature::for_modes(8)?;
    for mode in 1..=4 {
        let e = SpectralState::single_mode(8, mode, Complex64::new(1.0, 0.0))?;
        println!("e_{mode}: ratio {:.6}", strichartz_ratio(&e, p, 1.0, &quad, 401)?);
    }
    Ok(())
}
