//! Keyed random streams.
//!
//! Every sample index owns an independent ChaCha20 stream: the key is
//! expanded from the master seed and the 64-bit stream id is the sample
//! index, so a draw depends on `(master_seed, index)` only. Normals come
//! from the polar-free Box-Muller transform applied to consecutive pairs of
//! 53-bit uniforms in `(0, 1]`; each pair yields `(r cos θ, r sin θ)`.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Separates auxiliary streams (bootstrap, etc.) from sample streams.
pub const AUX_DOMAIN: u64 = 0x9E37_79B9_7F4A_7C15;

pub struct KeyedStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl KeyedStream {
    pub fn new(master_seed: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
        rng.set_stream(index);
        Self { rng, spare: None }
    }

    /// Stream in a separate key domain, for resampling and other non-sample draws.
    pub fn auxiliary(master_seed: u64, index: u64) -> Self {
        Self::new(master_seed ^ AUX_DOMAIN, index)
    }

    /// Uniform in `(0, 1]` with 53 random bits.
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.rng.next_u64();
            let m = (x as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// A pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open0();
        let u2 = self.uniform_open0();
        let radius = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        (radius * theta.cos(), radius * theta.sin())
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (a, b) = self.normal_pair();
        self.spare = Some(b);
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed() {
        let a: Vec<f64> = (0..8)
            .map({
                let mut s = KeyedStream::new(7, 3);
                move |_| s.uniform_open0()
            })
            .collect();
        let b: Vec<f64> = (0..8)
            .map({
                let mut s = KeyedStream::new(7, 3);
                move |_| s.uniform_open0()
            })
            .collect();
        let c: Vec<f64> = (0..8)
            .map({
                let mut s = KeyedStream::new(7, 4);
                move |_| s.uniform_open0()
            })
            .collect();
        let d: Vec<f64> = (0..8)
            .map({
                let mut s = KeyedStream::new(8, 3);
                move |_| s.uniform_open0()
            })
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert!(a.iter().all(|&u| u > 0.0 && u <= 1.0));
    }

    #[test]
    fn normal_moments() {
        let mut s = KeyedStream::new(1, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| s.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let kurt = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64 / (var * var);
        assert!(mean.abs() < 5.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 0.015);
        assert!((kurt - 3.0).abs() < 0.06);
    }

    #[test]
    fn below_is_in_range_and_covers() {
        let mut s = KeyedStream::auxiliary(3, 9);
        let mut seen = [0usize; 5];
        for _ in 0..5000 {
            seen[s.below(5) as usize] += 1;
        }
        assert!(seen.iter().all(|&k| k > 900));
    }
}
