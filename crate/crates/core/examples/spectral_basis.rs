//! Radial sine basis, quadrature and transforms.
//!
//! `cargo run --example spectral_basis`

use num_complex::Complex64;
use radwave::spectral::{
    analyze, eval_basis, lebesgue_norm, sobolev_norm, synthesize, RadialQuadrature, SpectralState,
};

fn main() -> radwave::Result<()> {
    let quad = RadialQuadrature::uniform(256)?;
    println!(
        "uniform grid: M = {}, {} nodes, capacity {} modes",
        quad.grid_points(),
        quad.len(),
        quad.capacity()
    );

    let gram = |n: usize, m: usize| -> radwave::Result<f64> {
        let mut acc = 0.0;
        for (&r, &w) in quad.nodes().iter().zip(quad.weights()) {
            acc += w * eval_basis(n, r)? * eval_basis(m, r)?;
        }
        Ok(acc)
    };
    println!("<e_1, e_1> = {:.15}", gram(1, 1)?);
    println!("<e_3, e_7> = {:.3e}", gram(3, 7)?);

    let u = SpectralState::new(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(-0.25, 0.25),
    ])?;
    let values = synthesize(&u, &quad)?;
    let back = analyze(&values, &quad, u.n_modes())?;
    let err = back.sub(&u)?.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    println!("synthesize -> analyze round-trip error {err:.3e}");

    for s in [0.0, 0.25, 1.0] {
        println!("||u||_H^{s} = {:.12}", sobolev_norm(&u, s));
    }
    println!("||u||_L^4 = {:.12}", lebesgue_norm(&u, 4.0, &quad)?);
    Ok(())
}
