#![allow(dead_code)]

use alphadiv::densities::{DensityPair, DiscreteDensity};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Pair on `n ∈ [1, 8]` points with values log-uniform in `[lo, hi]` and weights in `[0.5, 2]`.
pub fn random_pair(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> DensityPair<f64> {
    let n = rng.gen_range(1..=8);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let p: Vec<f64> = (0..n).map(|_| log_uniform(rng, lo, hi)).collect();
    let q: Vec<f64> = (0..n).map(|_| log_uniform(rng, lo, hi)).collect();
    with_weights(p, q, weights)
}

pub fn with_weights(p: Vec<f64>, q: Vec<f64>, weights: Vec<f64>) -> DensityPair<f64> {
    let support: Vec<String> = (0..p.len()).map(|i| format!("x{}", i)).collect();
    DensityPair::new(
        DiscreteDensity::new(support.clone(), p, weights.clone()).unwrap(),
        DiscreteDensity::new(support, q, weights).unwrap(),
    )
    .unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
