//! Draw a weighted Gibbs ensemble and estimate a few expectations.
//!
//! `cargo run --release --example gibbs_sampling -- [n_samples] [seed]`

use radwave::gibbs::sample_ensemble;
use radwave::spectral::{sobolev_norm, RadialQuadrature};
use radwave::verify::weighted_mean_se;

fn main() -> radwave::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_samples: usize = args.next().map_or(Ok(20_000), |s| s.parse()).expect("n_samples");
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse()).expect("seed");

    let n_modes = 16;
    let quad = RadialQuadrature::for_modes(n_modes)?;
    let ens = sample_ensemble(n_modes, n_samples, 1.0, seed, &quad)?;
    println!(
        "{} samples, N = {n_modes}, ESS = {:.1}",
        ens.len(),
        ens.effective_sample_size()
    );

    // Under the Gaussian part, E[z_n^2 |c_n|^2] = 2 for every mode.
    for n in [1, 4, 16] {
        let z2 = (std::f64::consts::PI * n as f64).powi(2);
        let v: Vec<f64> = ens
            .samples
            .iter()
            .map(|u| z2 * u.coeff(n).unwrap().norm_sqr())
            .collect();
        let (m, se) = weighted_mean_se(&v, &vec![0.0; v.len()])?;
        println!("mu_N:  E[z_{n}^2 |c_{n}|^2] = {m:.4} +- {se:.4}");
    }

    let norms: Vec<f64> = ens.samples.iter().map(|u| sobolev_norm(u, 0.25)).collect();
    let (m0, se0) = weighted_mean_se(&norms, &vec![0.0; norms.len()])?;
    let (m1, se1) = weighted_mean_se(&norms, &ens.log_weights)?;
    println!("E_mu[||u||_H^0.25]  = {m0:.4} +- {se0:.4}");
    println!("E_rho[||u||_H^0.25] = {m1:.4} +- {se1:.4}");

    let csv = ens.to_table().to_csv_string();
    println!(
        "ensemble CSV: {} bytes, header {}",
        csv.len(),
        csv.lines().next().unwrap_or("")
    );
    Ok(())
}
