//! Shared unit-test fixtures.

use crate::sparse::SparseMatrix;

/// The 9x9 tridiagonal test system used throughout the unit tests: unit
/// diagonal, symmetric off-diagonals -1/2, -1/3, ..., -1/9.
pub(crate) fn example_matrix() -> SparseMatrix {
    let n = 9;
    let mut entries = Vec::new();
    for i in 0..n {
        entries.push((i, i, 1.0));
    }
    for i in 0..n - 1 {
        let off = -1.0 / (i as f64 + 2.0);
        entries.push((i, i + 1, off));
        entries.push((i + 1, i, off));
    }
    SparseMatrix::from_triplets(n, n, &entries).unwrap()
}

pub(crate) fn example_solution() -> Vec<f64> {
    (1..=9).map(|k| 10f64.powi(-k)).collect()
}

pub(crate) fn example_initial_iterate() -> Vec<f64> {
    let mut x0 = vec![1.0, 1e-1];
    x0.extend((3..=9).map(|k| 1.001 * 10f64.powi(-k)));
    x0
}

/// Right-hand side b = A x assembled by direct tridiagonal expansion,
/// independent of the sparse kernels under test.
pub(crate) fn example_rhs() -> Vec<f64> {
    let x = example_solution();
    let n = x.len();
    let mut b = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        if i > 0 {
            acc += -1.0 / (i as f64 + 1.0) * x[i - 1];
        }
        acc += x[i];
        if i + 1 < n {
            acc += -1.0 / (i as f64 + 2.0) * x[i + 1];
        }
        b[i] = acc;
    }
    b
}
