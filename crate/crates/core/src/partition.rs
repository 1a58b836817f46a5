//! Index permutations and the block partition of a linear system induced by
//! a local domain.
//!
//! The permutation that places the local-domain components first is stored as
//! a pair of index maps and applied by gather/scatter; it is never
//! materialized as a matrix.

use crate::domain::LocalDomain;
use crate::error::{Error, Result};
use crate::sparse::{DenseVector, SparseMatrix};

/// Bijection on `{0..n}` stored as forward (old -> new) and inverse
/// (new -> old) index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    /// Build from a forward map; fails unless it is a bijection.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (old, &new) in forward.iter().enumerate() {
            if new >= n {
                return Err(Error::IndexOutOfRange { index: new, n });
            }
            if inverse[new] != usize::MAX {
                return Err(Error::InvalidStructure(format!(
                    "permutation maps two indices to {new}"
                )));
            }
            inverse[new] = old;
        }
        Ok(Self { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Old index -> new index.
    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    /// New index -> old index.
    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    /// Apply to a vector: `y[forward[i]] = x[i]`.
    pub fn apply(&self, x: &[f64]) -> Result<DenseVector> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "permutation operand",
                expected: self.len(),
                actual: x.len(),
            });
        }
        let mut y = vec![0.0; x.len()];
        for (old, &new) in self.forward.iter().enumerate() {
            y[new] = x[old];
        }
        Ok(y)
    }

    /// Apply the inverse: `x[i] = y[forward[i]]`.
    pub fn apply_inverse(&self, y: &[f64]) -> Result<DenseVector> {
        if y.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "permutation operand",
                expected: self.len(),
                actual: y.len(),
            });
        }
        let mut x = vec![0.0; y.len()];
        for (old, &new) in self.forward.iter().enumerate() {
            x[old] = y[new];
        }
        Ok(x)
    }
}

/// The 2x2 block view of a linear system under the permutation that lists
/// the local-domain components first:
///
/// ```text
/// [ local_block            local_to_complement ] [ x_local      ]   [ rhs_local      ]
/// [ complement_to_local    complement_block    ] [ x_complement ] = [ rhs_complement ]
/// ```
///
/// Both halves keep ascending original order, so reassembling the blocks
/// through `perm` reproduces the original system exactly.
#[derive(Debug, Clone)]
pub struct PartitionedSystem {
    /// Couplings internal to the local domain (K x K).
    pub local_block: SparseMatrix,
    /// Couplings from local rows to complement columns (K x (n-K)).
    pub local_to_complement: SparseMatrix,
    /// Couplings from complement rows to local columns ((n-K) x K).
    pub complement_to_local: SparseMatrix,
    /// Couplings internal to the complement ((n-K) x (n-K)).
    pub complement_block: SparseMatrix,
    /// Permutation placing the local-domain indices first.
    pub perm: Permutation,
    pub rhs_local: DenseVector,
    pub rhs_complement: DenseVector,
    pub x0_local: DenseVector,
    pub x0_complement: DenseVector,
}

impl PartitionedSystem {
    /// Size of the local block.
    pub fn local_size(&self) -> usize {
        self.local_block.nrows()
    }

    /// Global system dimension.
    pub fn global_size(&self) -> usize {
        self.perm.len()
    }
}

/// Split `A x = b` with initial iterate `x0` into the blocks induced by
/// `domain`. Values are moved, never recomputed, so the round trip is exact.
pub fn extract_partition(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    domain: &LocalDomain,
) -> Result<PartitionedSystem> {
    let n = a.square_dim("partition extraction")?;
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            context: "partition right-hand side",
            expected: n,
            actual: b.len(),
        });
    }
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            context: "partition initial iterate",
            expected: n,
            actual: x0.len(),
        });
    }
    if domain.system_size() != n {
        return Err(Error::DimensionMismatch {
            context: "partition domain",
            expected: n,
            actual: domain.system_size(),
        });
    }
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }

    let k = domain.len();
    // forward map: domain member -> its rank, complement member -> k + rank
    let mut forward = vec![usize::MAX; n];
    for (rank, &i) in domain.indices().iter().enumerate() {
        forward[i] = rank;
    }
    let complement = domain.complement();
    for (rank, &i) in complement.iter().enumerate() {
        forward[i] = k + rank;
    }
    let perm = Permutation::from_forward(forward)?;

    let mut bb = Vec::new();
    let mut be = Vec::new();
    let mut bf = Vec::new();
    let mut bc = Vec::new();
    for (i, j, v) in a.iter() {
        let ni = perm.forward()[i];
        let nj = perm.forward()[j];
        match (ni < k, nj < k) {
            (true, true) => bb.push((ni, nj, v)),
            (true, false) => be.push((ni, nj - k, v)),
            (false, true) => bf.push((ni - k, nj, v)),
            (false, false) => bc.push((ni - k, nj - k, v)),
        }
    }

    Ok(PartitionedSystem {
        local_block: SparseMatrix::from_triplets(k, k, &bb)?,
        local_to_complement: SparseMatrix::from_triplets(k, n - k, &be)?,
        complement_to_local: SparseMatrix::from_triplets(n - k, k, &bf)?,
        complement_block: SparseMatrix::from_triplets(n - k, n - k, &bc)?,
        rhs_local: domain.indices().iter().map(|&i| b[i]).collect(),
        rhs_complement: complement.iter().map(|&i| b[i]).collect(),
        x0_local: domain.indices().iter().map(|&i| x0[i]).collect(),
        x0_complement: complement.iter().map(|&i| x0[i]).collect(),
        perm,
    })
}

/// Inverse of the partition gather: place `x_local` on the domain indices
/// and `x_complement` on the rest.
pub fn scatter_assemble(
    domain: &LocalDomain,
    x_local: &[f64],
    x_complement: &[f64],
) -> Result<DenseVector> {
    let n = domain.system_size();
    if x_local.len() != domain.len() {
        return Err(Error::DimensionMismatch {
            context: "scatter local half",
            expected: domain.len(),
            actual: x_local.len(),
        });
    }
    if x_complement.len() != n - domain.len() {
        return Err(Error::DimensionMismatch {
            context: "scatter complement half",
            expected: n - domain.len(),
            actual: x_complement.len(),
        });
    }
    let mut x = vec![0.0; n];
    for (rank, &i) in domain.indices().iter().enumerate() {
        x[i] = x_local[rank];
    }
    for (rank, &i) in domain.complement().iter().enumerate() {
        x[i] = x_complement[rank];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_initial_iterate, example_matrix, example_rhs};

    #[test]
    fn permutation_roundtrip() {
        let p = Permutation::from_forward(vec![2, 0, 3, 1]).unwrap();
        let x = vec![10.0, 20.0, 30.0, 40.0];
        let y = p.apply(&x).unwrap();
        assert_eq!(p.apply_inverse(&y).unwrap(), x);
        for i in 0..4 {
            assert_eq!(p.inverse()[p.forward()[i]], i);
        }
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::from_forward(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_forward(vec![0, 3]).is_err());
    }

    #[test]
    fn full_domain_partition_is_whole_matrix() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let domain = LocalDomain::full(9);
        let part = extract_partition(&a, &b, &x0, &domain).unwrap();
        assert_eq!(part.local_block, a);
        assert_eq!(part.local_to_complement.nnz(), 0);
        assert_eq!(part.complement_to_local.nnz(), 0);
        assert_eq!(part.complement_block.nnz(), 0);
        assert_eq!(part.rhs_local, b);
        assert!(part.rhs_complement.is_empty());
    }

    #[test]
    fn example_leading_block_partition() {
        // Local domain {1,2,3} (1-based): B is the leading tridiagonal 3x3
        // block and E holds the single coupling -1/4 from row 3 to column 4.
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let domain = LocalDomain::new(9, vec![0, 1, 2]).unwrap();
        let part = extract_partition(&a, &b, &x0, &domain).unwrap();

        assert_eq!(part.local_block.dim(), 3);
        assert_eq!(part.local_block.get(0, 1), Some(-0.5));
        assert_eq!(part.local_block.get(1, 2), Some(-1.0 / 3.0));
        assert_eq!(part.local_block.get(2, 1), Some(-1.0 / 3.0));
        assert_eq!(part.local_block.get(0, 2), None);

        assert_eq!(part.local_to_complement.nnz(), 1);
        assert_eq!(part.local_to_complement.get(2, 0), Some(-0.25));

        assert_eq!(part.complement_to_local.nnz(), 1);
        assert_eq!(part.complement_to_local.get(0, 2), Some(-0.25));
    }

    #[test]
    fn empty_domain_rejected() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let domain = LocalDomain::empty(9);
        assert!(matches!(
            extract_partition(&a, &b, &x0, &domain),
            Err(Error::EmptyDomain)
        ));
    }

    #[test]
    fn scatter_then_gather_is_identity() {
        let domain = LocalDomain::new(6, vec![1, 3, 4]).unwrap();
        let x = vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5];
        let x_local: Vec<f64> = domain.indices().iter().map(|&i| x[i]).collect();
        let x_comp: Vec<f64> = domain.complement().iter().map(|&i| x[i]).collect();
        assert_eq!(scatter_assemble(&domain, &x_local, &x_comp).unwrap(), x);
    }

    #[test]
    fn scatter_leaves_complement_untouched() {
        let domain = LocalDomain::new(9, vec![0, 1, 2]).unwrap();
        let x0 = example_initial_iterate();
        let x_comp: Vec<f64> = domain.complement().iter().map(|&i| x0[i]).collect();
        let assembled = scatter_assemble(&domain, &[7.0, 8.0, 9.0], &x_comp).unwrap();
        for &i in &domain.complement() {
            assert_eq!(assembled[i], x0[i]);
        }
        assert_eq!(&assembled[..3], &[7.0, 8.0, 9.0]);
    }

    #[test]
    fn scatter_size_mismatch_rejected() {
        let domain = LocalDomain::new(4, vec![0]).unwrap();
        assert!(scatter_assemble(&domain, &[1.0, 2.0], &[0.0; 3]).is_err());
        assert!(scatter_assemble(&domain, &[1.0], &[0.0; 2]).is_err());
    }
}
