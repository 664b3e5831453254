//! Shared inputs for the benchmarks.

use lotkaian_core::genmodels::sample_zeta;
use lotkaian_core::{AuthorDataset, WorkRecord};

/// Bibliography of `n` works whose cites follow a shifted zeta law, so
/// that zero-cite works are present as in real exports.
pub fn synthetic_bibliography(alpha: f64, n: usize, seed: u64) -> AuthorDataset {
    let works = sample_zeta(alpha, 1, n, seed)
        .expect("valid zeta parameters")
        .into_iter()
        .enumerate()
        .map(|(i, c)| WorkRecord::new(format!("work {i}"), c - 1).with_authors(["B Author"]))
        .collect();
    AuthorDataset::new("B Author", works)
}

/// A power-law tail of `n` values on `k >= x_min`.
pub fn tail(alpha: f64, x_min: u64, n: usize, seed: u64) -> Vec<u64> {
    sample_zeta(alpha, x_min, n, seed).expect("valid zeta parameters")
}
