//! Shared fixtures for the benchmark suite.

use num_complex::Complex64;
use riesz_core::{DirichletPolynomial, Frequency};

/// Ordinary polynomial with deterministic pseudo-random phases, a_n = e^{i n}/sqrt(n).
pub fn bench_poly(n: usize) -> DirichletPolynomial {
    let freq = Frequency::log_naturals(n).unwrap();
    let coeffs: Vec<Complex64> = (1..=n)
        .map(|i| {
            let phase = i as f64;
            Complex64::new(phase.cos(), phase.sin()) / (i as f64).sqrt()
        })
        .collect();
    DirichletPolynomial::new(freq, coeffs).unwrap()
}
