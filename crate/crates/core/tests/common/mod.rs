//! Dense reference implementations used as independent oracles, plus the
//! 9x9 worked-example fixtures. Everything here is deliberately simple and
//! separate from the sparse code paths under test.

#![allow(dead_code)]

use locsolve::sparse::SparseMatrix;

/// Dense matrix assembled directly from triplets (later duplicates add).
pub fn dense_from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut dense = vec![vec![0.0; n]; n];
    for &(i, j, v) in triplets {
        dense[i][j] += v;
    }
    dense
}

/// Dense matrix-vector product in ascending column order.
pub fn dense_matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&aij, &xj)| aij * xj).sum())
        .collect()
}

/// Dense residual b - A x.
pub fn dense_residual(a: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    dense_matvec(a, x)
        .iter()
        .zip(b)
        .map(|(&ax, &bi)| bi - ax)
        .collect()
}

/// Solve A x = b by LU decomposition with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn lu_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut lu: Vec<Vec<f64>> = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                lu[i][col]
                    .abs()
                    .partial_cmp(&lu[j][col].abs())
                    .expect("finite pivots")
            })
            .expect("non-empty column");
        lu.swap(col, pivot);
        perm.swap(col, pivot);
        assert!(lu[col][col] != 0.0, "singular oracle matrix");
        for row in col + 1..n {
            let factor = lu[row][col] / lu[col][col];
            lu[row][col] = factor;
            for k in col + 1..n {
                let upper = lu[col][k];
                lu[row][k] -= factor * upper;
            }
        }
    }

    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[perm[i]];
        for j in 0..i {
            s -= lu[i][j] * y[j];
        }
        y[i] = s;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in i + 1..n {
            s -= lu[i][j] * x[j];
        }
        x[i] = s / lu[i][i];
    }
    x
}

/// Row-pattern adjacency oracle: indices outside `members` whose dense row
/// has a stored position (triplet present) in a member column.
pub fn dense_neighbors(
    n: usize,
    triplets: &[(usize, usize, f64)],
    members: &[usize],
) -> Vec<usize> {
    let mut member = vec![false; n];
    for &i in members {
        member[i] = true;
    }
    let mut stored = vec![vec![false; n]; n];
    for &(i, j, _) in triplets {
        stored[i][j] = true;
    }
    (0..n)
        .filter(|&j| !member[j] && (0..n).any(|c| stored[j][c] && member[c]))
        .collect()
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Worked-example fixtures (9x9 tridiagonal system).
// ---------------------------------------------------------------------------

pub fn example_triplets() -> Vec<(usize, usize, f64)> {
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
    entries
}

pub fn example_matrix() -> SparseMatrix {
    SparseMatrix::from_triplets(9, 9, &example_triplets()).unwrap()
}

pub fn example_solution() -> Vec<f64> {
    (1..=9).map(|k| 10f64.powi(-k)).collect()
}

pub fn example_initial_iterate() -> Vec<f64> {
    let mut x0 = vec![1.0, 1e-1];
    x0.extend((3..=9).map(|k| 1.001 * 10f64.powi(-k)));
    x0
}

/// b = A x by direct tridiagonal expansion.
pub fn example_rhs() -> Vec<f64> {
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
