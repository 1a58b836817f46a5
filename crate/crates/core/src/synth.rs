//! Reproducible random test problems. The generators are seeded explicitly;
//! `seed_from_env` honors the `LOCSOLVE_SEED` environment variable so test
//! runs can be re-randomized without code changes.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::sparse::{DenseVector, SparseMatrix};

pub const SEED_ENV_VAR: &str = "LOCSOLVE_SEED";
const DEFAULT_SEED: u64 = 0x10c5_01fe;

/// Seed from `LOCSOLVE_SEED` when set and parseable, otherwise the fixed
/// default.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV_VAR)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly diagonally dominant matrix with a random sparse band pattern,
/// not necessarily symmetric.
pub fn random_diagonally_dominant(n: usize, rng: &mut ChaCha8Rng) -> SparseMatrix {
    let mut entries = Vec::new();
    let mut row_sums = vec![0.0; n];
    for (i, row_sum) in row_sums.iter_mut().enumerate() {
        let couplings = rng.gen_range(1..=4usize.min(n.max(2) - 1));
        for _ in 0..couplings {
            let span = 5.max(n / 4);
            let lo = i.saturating_sub(span);
            let hi = (i + span).min(n - 1);
            let j = rng.gen_range(lo..=hi);
            if j == i {
                continue;
            }
            let v: f64 = rng.gen_range(-1.0..1.0);
            entries.push((i, j, v));
            *row_sum += v.abs();
        }
    }
    for (i, &sum) in row_sums.iter().enumerate() {
        let margin: f64 = rng.gen_range(0.5..1.5);
        entries.push((i, i, sum + margin));
    }
    // duplicate coordinates are summed by the builder, which can shrink the
    // off-diagonal mass and only strengthens dominance
    SparseMatrix::from_triplets(n, n, &entries).expect("generated structure is valid")
}

/// Symmetric strictly diagonally dominant matrix with positive diagonal,
/// hence symmetric positive definite.
pub fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> SparseMatrix {
    let mut entries = Vec::new();
    let mut row_sums = vec![0.0; n];
    for i in 0..n {
        let couplings = rng.gen_range(1..=3usize);
        for _ in 0..couplings {
            let offset = rng.gen_range(1..=4usize);
            let j = i + offset;
            if j >= n {
                continue;
            }
            let v: f64 = rng.gen_range(-1.0..1.0);
            entries.push((i, j, v));
            entries.push((j, i, v));
            let weight = v.abs();
            row_sums[i] += weight;
            row_sums[j] += weight;
        }
    }
    for (i, &sum) in row_sums.iter().enumerate() {
        let margin: f64 = rng.gen_range(0.5..1.5);
        entries.push((i, i, sum + margin));
    }
    SparseMatrix::from_triplets(n, n, &entries).expect("generated structure is valid")
}

/// Banded matrix with every in-band position stored (including possible
/// explicit zeros) and a dominant diagonal.
pub fn random_banded(n: usize, bandwidth: usize, rng: &mut ChaCha8Rng) -> SparseMatrix {
    let mut entries = Vec::new();
    for i in 0..n {
        let lo = i.saturating_sub(bandwidth);
        let hi = (i + bandwidth).min(n - 1);
        let mut off_sum = 0.0;
        for j in lo..=hi {
            if j != i {
                let v: f64 = rng.gen_range(-1.0..1.0);
                entries.push((i, j, v));
                off_sum += v.abs();
            }
        }
        entries.push((i, i, off_sum + rng.gen_range(0.5..1.5)));
    }
    SparseMatrix::from_triplets(n, n, &entries).expect("generated structure is valid")
}

pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> DenseVector {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}
