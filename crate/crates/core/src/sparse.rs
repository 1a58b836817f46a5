//! Compressed-row sparse matrices and small dense-vector helpers.
//!
//! The stored pattern doubles as the adjacency structure of the system:
//! entry `(i, j)` being present makes `i` and `j` adjacent, and explicit
//! zeros are kept.

use crate::error::{Error, Result};

/// Dense vector of `f64` components. File readers validate finiteness at the
/// boundary; internal code treats any `Vec<f64>` of the right length as valid.
pub type DenseVector = Vec<f64>;

/// Compressed sparse row matrix. Within each row the column indices are
/// strictly increasing. Most of the crate requires square matrices; the
/// rectangular case exists for the off-diagonal blocks of a partitioned
/// system.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_starts: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from raw CSR arrays, validating the structural invariants.
    pub fn from_csr(
        nrows: usize,
        ncols: usize,
        row_starts: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_starts.len() != nrows + 1 {
            return Err(Error::InvalidStructure(format!(
                "row_starts length {} != nrows + 1 = {}",
                row_starts.len(),
                nrows + 1
            )));
        }
        if row_starts[0] != 0 || row_starts[nrows] != col_indices.len() {
            return Err(Error::InvalidStructure(
                "row_starts must begin at 0 and end at the entry count".into(),
            ));
        }
        if col_indices.len() != values.len() {
            return Err(Error::InvalidStructure(
                "col_indices and values length mismatch".into(),
            ));
        }
        for row in 0..nrows {
            if row_starts[row] > row_starts[row + 1] {
                return Err(Error::InvalidStructure(format!(
                    "row_starts decreasing at row {row}"
                )));
            }
            let cols = &col_indices[row_starts[row]..row_starts[row + 1]];
            for pair in cols.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(Error::InvalidStructure(format!(
                        "columns not strictly increasing in row {row}"
                    )));
                }
            }
            if let Some(&last) = cols.last() {
                if last >= ncols {
                    return Err(Error::IndexOutOfRange {
                        index: last,
                        n: ncols,
                    });
                }
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix values",
            });
        }
        Ok(Self {
            nrows,
            ncols,
            row_starts,
            col_indices,
            values,
        })
    }

    /// Build from coordinate triplets. Duplicate coordinates are summed;
    /// explicit zeros (including sums that cancel to zero) stay in the
    /// pattern.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(i, j, v) in entries {
            if i >= nrows {
                return Err(Error::IndexOutOfRange { index: i, n: nrows });
            }
            if j >= ncols {
                return Err(Error::IndexOutOfRange { index: j, n: ncols });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: "matrix values",
                });
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = entries.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_starts = vec![0usize; nrows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_starts[i + 1] += 1;
                col_indices.push(j);
                values.push(v);
                last = Some((i, j));
            }
        }
        for row in 0..nrows {
            row_starts[row + 1] += row_starts[row];
        }
        Self::from_csr(nrows, ncols, row_starts, col_indices, values)
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_starts: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.nrows
    }

    /// Number of stored entries (explicit zeros included).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_starts[i]..self.row_starts[i + 1];
        (&self.col_indices[span.clone()], &self.values[span])
    }

    /// Stored value at `(i, j)`, or `None` when the position is not in the
    /// pattern.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    /// Diagonal entries; positions missing from the pattern report 0.0.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i).unwrap_or(0.0))
            .collect()
    }

    /// Iterate stored entries as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    fn check_square(&self, context: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare(context))
        }
    }

    /// Require a square matrix and return its dimension.
    pub fn square_dim(&self, context: &'static str) -> Result<usize> {
        self.check_square(context)?;
        Ok(self.nrows)
    }
}

/// Sparse matrix-vector product `y = A x` over the stored entries.
pub fn spmv(a: &SparseMatrix, x: &[f64]) -> Result<DenseVector> {
    if x.len() != a.ncols() {
        return Err(Error::DimensionMismatch {
            context: "spmv operand",
            expected: a.ncols(),
            actual: x.len(),
        });
    }
    let mut y = vec![0.0; a.nrows()];
    for (i, yi) in y.iter_mut().enumerate() {
        let (cols, vals) = a.row(i);
        let mut acc = 0.0;
        for (&j, &v) in cols.iter().zip(vals) {
            acc += v * x[j];
        }
        *yi = acc;
    }
    Ok(y)
}

/// Finite and strictly positive; rejects NaN.
pub(crate) fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

/// Residual `r = b - A x`, computed through the same accumulation path as
/// [`spmv`] so that `b = spmv(A, x)` yields an exactly zero residual.
pub fn residual(a: &SparseMatrix, b: &[f64], x: &[f64]) -> Result<DenseVector> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            context: "residual right-hand side",
            expected: a.nrows(),
            actual: b.len(),
        });
    }
    let y = spmv(a, x)?;
    Ok(b.iter().zip(&y).map(|(&bi, &yi)| bi - yi).collect())
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
