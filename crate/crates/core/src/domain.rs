//! Construction of the local domain: the index set of components whose
//! values are expected to move away from the initial iterate.
//!
//! Two strategies are provided. The gradient strategy thresholds an l1-style
//! per-component gradient of the initial iterate against a fraction of its
//! maximum. The residual strategy starts from the components whose initial
//! residual violates the componentwise convergence bound and then grows the
//! set through the adjacency structure.

use crate::error::{Error, Result};
use crate::sparse::{norm2, residual, DenseVector, SparseMatrix};

/// Sorted, duplicate-free set of component indices within a system of a
/// fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDomain {
    n: usize,
    indices: Vec<usize>,
}

impl LocalDomain {
    /// Build from arbitrary indices; they are sorted and deduplicated.
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(Self { n, indices })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            indices: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            indices: (0..n).collect(),
        }
    }

    /// Number of members (the K of the method).
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Dimension of the system the domain indexes into.
    pub fn system_size(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Ascending complement of the member set.
    pub fn complement(&self) -> Vec<usize> {
        let mut member = vec![false; self.n];
        for &i in &self.indices {
            member[i] = true;
        }
        (0..self.n).filter(|&i| !member[i]).collect()
    }

    /// Membership mask of length `n`.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }

    /// Fraction of the system covered by the domain.
    pub fn eta(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.indices.len() as f64 / self.n as f64
        }
    }
}

/// Per-component gradient of an iterate over the matrix adjacency, and its
/// maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    values: Vec<f64>,
    max: f64,
}

impl GradientField {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

/// One neighbor test inside an expansion round.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborEvaluation {
    pub index: usize,
    /// |r0_j| plus the sum of |a_{j,l} x0_l| over current domain members l.
    pub value: f64,
    pub admitted: bool,
}

/// Record of one expansion round.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRound {
    /// 1-based round counter m.
    pub round: usize,
    pub neighbors: Vec<usize>,
    pub evaluations: Vec<NeighborEvaluation>,
    pub admitted: Vec<usize>,
    /// |domain| after the round.
    pub domain_size_after: usize,
}

/// Full account of a residual-strategy domain build: the threshold, the
/// initial residual it was measured against, the seed set, and every
/// expansion round.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBuildTrace {
    /// tau = eps * ||b||_2 / sqrt(N)
    pub threshold: f64,
    pub initial_residual: DenseVector,
    pub initial_bad_points: Vec<usize>,
    pub rounds: Vec<ExpansionRound>,
}

impl DomainBuildTrace {
    /// Render a human-readable expansion table. Indices are printed 1-based.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("threshold tau = {:.3e}\n", self.threshold));
        out.push_str(&format!(
            "initial bad points = {} (K = {})\n",
            format_index_set(&self.initial_bad_points),
            self.initial_bad_points.len()
        ));
        out.push_str("m | neighbors | admitted | K | admission values\n");
        for round in &self.rounds {
            let values = round
                .evaluations
                .iter()
                .map(|e| format!("{}: {:.3e}", e.index + 1, e.value))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(
                "{} | {} | {} | {} | {}\n",
                round.round,
                format_index_set(&round.neighbors),
                format_index_set(&round.admitted),
                round.domain_size_after,
                values
            ));
        }
        out
    }
}

fn format_index_set(indices: &[usize]) -> String {
    const LIMIT: usize = 12;
    if indices.is_empty() {
        return "{}".to_string();
    }
    let shown = indices.len().min(LIMIT);
    let body = indices[..shown]
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(", ");
    if indices.len() > LIMIT {
        format!("{{{body}, ... ({} total)}}", indices.len())
    } else {
        format!("{{{body}}}")
    }
}

/// Componentwise gradient of `x0` over the stored adjacency of `a`:
/// `g_i = sum over stored off-diagonal columns j of row i of |x0_i - x0_j|`.
pub fn compute_gradient(a: &SparseMatrix, x0: &[f64]) -> Result<GradientField> {
    let n = a.square_dim("gradient computation")?;
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            context: "gradient iterate",
            expected: n,
            actual: x0.len(),
        });
    }
    let mut values = vec![0.0; n];
    let mut max = 0.0f64;
    for i in 0..n {
        let (cols, _) = a.row(i);
        let mut g = 0.0;
        for &j in cols {
            if j != i {
                g += (x0[i] - x0[j]).abs();
            }
        }
        values[i] = g;
        if g > max {
            max = g;
        }
    }
    Ok(GradientField { values, max })
}

/// Gradient-strategy domain: components with `g_i > alpha * g_max`.
///
/// `alpha = 0` is special-cased to the full domain so the stated limit
/// behavior holds even for zero-gradient components; `alpha = 1` yields the
/// empty domain because the comparison is strict.
pub fn build_gradient_domain(
    a: &SparseMatrix,
    x0: &[f64],
    alpha: f64,
) -> Result<(LocalDomain, GradientField)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let gradient = compute_gradient(a, x0)?;
    let n = a.dim();
    if alpha == 0.0 {
        return Ok((LocalDomain::full(n), gradient));
    }
    let cut = alpha * gradient.max();
    let indices = (0..n).filter(|&i| gradient.values()[i] > cut).collect();
    Ok((LocalDomain::new(n, indices)?, gradient))
}

/// Seed the residual-strategy domain: components whose initial residual
/// exceeds `tau = eps * ||b||_2 / sqrt(N)` in absolute value.
pub fn find_bad_points(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    eps: f64,
) -> Result<(LocalDomain, DomainBuildTrace)> {
    if !crate::sparse::positive(eps) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {eps}"
        )));
    }
    let n = a.square_dim("bad-point search")?;
    let r0 = residual(a, b, x0)?;
    let threshold = eps * norm2(b) / (n as f64).sqrt();
    let indices: Vec<usize> = (0..n).filter(|&i| r0[i].abs() > threshold).collect();
    let domain = LocalDomain::new(n, indices.clone())?;
    let trace = DomainBuildTrace {
        threshold,
        initial_residual: r0,
        initial_bad_points: indices,
        rounds: Vec::new(),
    };
    Ok((domain, trace))
}

/// Row-pattern neighbors of the domain: indices j outside the domain whose
/// row holds a stored entry in some domain column. Self-adjacency is
/// excluded by construction.
pub fn neighbors(a: &SparseMatrix, domain: &LocalDomain) -> Result<Vec<usize>> {
    let n = a.square_dim("neighbor search")?;
    if domain.system_size() != n {
        return Err(Error::DimensionMismatch {
            context: "neighbor domain",
            expected: n,
            actual: domain.system_size(),
        });
    }
    let mask = domain.mask();
    let mut out = Vec::new();
    for j in 0..n {
        if mask[j] {
            continue;
        }
        let (cols, _) = a.row(j);
        if cols.iter().any(|&c| mask[c]) {
            out.push(j);
        }
    }
    Ok(out)
}

/// Grow the domain for up to `max_rounds` rounds. In each round every
/// neighbor j is admitted iff
/// `|r0_j| + sum over current members l of |a_{j,l} x0_l|` exceeds the
/// trace threshold; a round that admits nothing ends the loop. The initial
/// residual in the trace is never recomputed.
pub fn expand_domain(
    a: &SparseMatrix,
    x0: &[f64],
    domain: LocalDomain,
    mut trace: DomainBuildTrace,
    max_rounds: usize,
) -> Result<(LocalDomain, DomainBuildTrace)> {
    let n = a.square_dim("domain expansion")?;
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            context: "expansion iterate",
            expected: n,
            actual: x0.len(),
        });
    }
    if trace.initial_residual.len() != n {
        return Err(Error::DimensionMismatch {
            context: "expansion trace residual",
            expected: n,
            actual: trace.initial_residual.len(),
        });
    }

    let mut members = domain.indices().to_vec();
    let mut mask = domain.mask();
    let mut current = domain;

    for m in 1..=max_rounds {
        let nbrs = neighbors(a, &current)?;
        let mut evaluations = Vec::with_capacity(nbrs.len());
        let mut admitted = Vec::new();
        for &j in &nbrs {
            let (cols, vals) = a.row(j);
            let mut coupling = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                if mask[c] {
                    coupling += (v * x0[c]).abs();
                }
            }
            let value = trace.initial_residual[j].abs() + coupling;
            let admit = value > trace.threshold;
            evaluations.push(NeighborEvaluation {
                index: j,
                value,
                admitted: admit,
            });
            if admit {
                admitted.push(j);
            }
        }

        let stop = admitted.is_empty();
        if !stop {
            for &j in &admitted {
                mask[j] = true;
            }
            members.extend_from_slice(&admitted);
            current = LocalDomain::new(n, members.clone())?;
            members = current.indices().to_vec();
        }
        trace.rounds.push(ExpansionRound {
            round: m,
            neighbors: nbrs,
            evaluations,
            admitted,
            domain_size_after: current.len(),
        });
        if stop {
            break;
        }
    }
    Ok((current, trace))
}

/// Residual-strategy domain construction: seed with the bad points, then
/// expand for up to `max_rounds` rounds.
pub fn build_residual_domain(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    eps: f64,
    max_rounds: usize,
) -> Result<(LocalDomain, DomainBuildTrace)> {
    let (domain, trace) = find_bad_points(a, b, x0, eps)?;
    expand_domain(a, x0, domain, trace, max_rounds)
}
