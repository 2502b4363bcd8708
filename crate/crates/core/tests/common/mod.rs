#![allow(dead_code)]

use std::io::Write;

use grover_qaoa::dist::{DiscreteSpectrum, EmpiricalLaw};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random law with `2..=max_atoms` distinct integer costs and counts in `1..=1000`.
pub fn random_empirical(rng: &mut ChaCha8Rng, max_atoms: usize) -> EmpiricalLaw<f64> {
    let n = rng.random_range(2..=max_atoms);
    let mut values: Vec<i64> = Vec::with_capacity(n);
    while values.len() < n {
        let v = rng.random_range(-500..=500);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.sort_unstable();
    let pairs: Vec<(f64, u64)> = values.iter().map(|v| (*v as f64, rng.random_range(1..=1000))).collect();
    EmpiricalLaw::from_counts(&pairs).expect("valid random law")
}

/// Random spectrum with real costs in `[-10, 10]` and masses bounded away from zero.
pub fn random_spectrum(rng: &mut ChaCha8Rng, max_atoms: usize) -> DiscreteSpectrum<f64> {
    let n = rng.random_range(2..=max_atoms);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    DiscreteSpectrum::from_unsorted(values, weights).expect("valid random spectrum")
}

/// Prints a criterion verdict past the test harness's output capture.
pub fn verdict(id: u32, pass: bool, detail: &str) {
    let line = format!("criterion {id:>2}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
    let _ = writeln!(std::io::stderr(), "{line}");
}
