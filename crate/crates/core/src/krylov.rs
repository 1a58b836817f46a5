//! Restarted GMRES with pluggable left preconditioning, plus the forward
//! Gauss-Seidel smoother.
//!
//! Convergence is always tested on the true (unpreconditioned) residual
//! `||b - A x||_2 <= eps * ||b||_2`, with a zero right-hand side falling
//! back to the absolute criterion. The residual history stores explicitly
//! recomputed true residual norms, one per iteration plus the initial one,
//! so every entry can be re-verified independently.

use crate::error::{Error, Result};
use crate::sparse::{axpy, dot, norm2, residual, spmv, DenseVector, SparseMatrix};

/// Preconditioner applied from the left inside GMRES.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
    /// Symmetric Gauss-Seidel splitting (D+L) D^-1 (D+U).
    SymmetricGaussSeidel,
}

impl Preconditioner {
    pub fn label(&self) -> &'static str {
        match self {
            Preconditioner::None => "none",
            Preconditioner::Jacobi => "jacobi",
            Preconditioner::SymmetricGaussSeidel => "sgs",
        }
    }
}

/// Iterative solver parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Relative residual tolerance.
    pub tolerance: f64,
    /// Total inner-iteration budget across restarts.
    pub max_iterations: usize,
    /// Krylov subspace dimension per restart cycle.
    pub restart_dim: usize,
    pub preconditioner: Preconditioner,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 80,
            restart_dim: 40,
            preconditioner: Preconditioner::SymmetricGaussSeidel,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !crate::sparse::positive(self.tolerance) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.restart_dim == 0 {
            return Err(Error::InvalidParameter("restart_dim must be >= 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one iterative solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub x: DenseVector,
    pub converged: bool,
    /// Inner iterations performed.
    pub iterations: usize,
    /// True residual norms, length `iterations + 1`.
    pub residual_history: Vec<f64>,
}

enum PrecondOp {
    Identity,
    Jacobi { inv_diag: Vec<f64> },
    Sgs { diag: Vec<f64> },
}

impl PrecondOp {
    fn build(kind: Preconditioner, a: &SparseMatrix) -> Result<Self> {
        match kind {
            Preconditioner::None => Ok(PrecondOp::Identity),
            Preconditioner::Jacobi => {
                let diag = checked_diagonal(a)?;
                Ok(PrecondOp::Jacobi {
                    inv_diag: diag.iter().map(|d| 1.0 / d).collect(),
                })
            }
            Preconditioner::SymmetricGaussSeidel => Ok(PrecondOp::Sgs {
                diag: checked_diagonal(a)?,
            }),
        }
    }

    fn apply(&self, a: &SparseMatrix, r: &[f64]) -> DenseVector {
        match self {
            PrecondOp::Identity => r.to_vec(),
            PrecondOp::Jacobi { inv_diag } => {
                r.iter().zip(inv_diag).map(|(&ri, &di)| ri * di).collect()
            }
            PrecondOp::Sgs { diag } => {
                let n = diag.len();
                // (D+L) t = r, forward substitution
                let mut t = vec![0.0; n];
                for i in 0..n {
                    let (cols, vals) = a.row(i);
                    let mut s = r[i];
                    for (&j, &v) in cols.iter().zip(vals) {
                        if j < i {
                            s -= v * t[j];
                        }
                    }
                    t[i] = s / diag[i];
                }
                // (D+U) y = D t, backward substitution
                let mut y = vec![0.0; n];
                for i in (0..n).rev() {
                    let (cols, vals) = a.row(i);
                    let mut s = diag[i] * t[i];
                    for (&j, &v) in cols.iter().zip(vals) {
                        if j > i {
                            s -= v * y[j];
                        }
                    }
                    y[i] = s / diag[i];
                }
                y
            }
        }
    }
}

fn checked_diagonal(a: &SparseMatrix) -> Result<Vec<f64>> {
    (0..a.dim())
        .map(|i| match a.get(i, i) {
            Some(d) if d != 0.0 => Ok(d),
            _ => Err(Error::ZeroDiagonal { row: i }),
        })
        .collect()
}

/// Apply `M^-1 r` for the chosen splitting.
pub fn apply_preconditioner(
    kind: Preconditioner,
    a: &SparseMatrix,
    r: &[f64],
) -> Result<DenseVector> {
    let n = a.square_dim("preconditioner application")?;
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            context: "preconditioner operand",
            expected: n,
            actual: r.len(),
        });
    }
    Ok(PrecondOp::build(kind, a)?.apply(a, r))
}

/// `sweeps` forward Gauss-Seidel updates in natural ordering. The input
/// iterate is untouched; the updated copy is returned.
pub fn gauss_seidel_sweeps(
    a: &SparseMatrix,
    b: &[f64],
    x: &[f64],
    sweeps: usize,
) -> Result<DenseVector> {
    let n = a.square_dim("Gauss-Seidel sweep")?;
    if b.len() != n || x.len() != n {
        return Err(Error::DimensionMismatch {
            context: "Gauss-Seidel operands",
            expected: n,
            actual: if b.len() != n { b.len() } else { x.len() },
        });
    }
    let diag = checked_diagonal(a)?;
    let mut out = x.to_vec();
    for _ in 0..sweeps {
        for i in 0..n {
            let (cols, vals) = a.row(i);
            let mut s = b[i];
            for (&j, &v) in cols.iter().zip(vals) {
                if j != i {
                    s -= v * out[j];
                }
            }
            out[i] = s / diag[i];
        }
    }
    Ok(out)
}

/// Left-preconditioned restarted GMRES with modified Gram-Schmidt
/// orthogonalization.
///
/// After every inner iteration the candidate solution is formed and its true
/// residual recorded; convergence and the returned history both use these
/// recomputed norms. A happy breakdown takes the exact solution within the
/// current Krylov subspace and restarts if that is still not enough. When
/// the budget runs out the iterate with the smallest recorded true residual
/// is returned.
pub fn gmres_solve(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    config: &SolverConfig,
) -> Result<SolveOutcome> {
    config.validate()?;
    let n = a.square_dim("GMRES solve")?;
    if b.len() != n || x0.len() != n {
        return Err(Error::DimensionMismatch {
            context: "GMRES operands",
            expected: n,
            actual: if b.len() != n { b.len() } else { x0.len() },
        });
    }

    let precond = PrecondOp::build(config.preconditioner, a)?;
    let bnorm = norm2(b);
    let threshold = if bnorm > 0.0 {
        config.tolerance * bnorm
    } else {
        config.tolerance
    };

    let mut x = x0.to_vec();
    let mut r = residual(a, b, &x)?;
    let mut rnorm = norm2(&r);
    if !rnorm.is_finite() {
        return Err(Error::NonFinite {
            context: "initial residual",
        });
    }
    let mut history = vec![rnorm];
    let mut iterations = 0usize;
    let mut best_x = x.clone();
    let mut best_rnorm = rnorm;

    if rnorm <= threshold {
        return Ok(SolveOutcome {
            x,
            converged: true,
            iterations,
            residual_history: history,
        });
    }

    let m = config.restart_dim;
    'outer: while iterations < config.max_iterations {
        let z = precond.apply(a, &r);
        let beta = norm2(&z);
        if !beta.is_finite() {
            return Err(Error::NonFinite {
                context: "preconditioned residual",
            });
        }
        if beta == 0.0 {
            // Preconditioned residual vanished while the true residual is
            // still above the threshold: no direction to continue in.
            break;
        }

        let mut basis: Vec<DenseVector> = Vec::with_capacity(m + 1);
        basis.push(z.iter().map(|v| v / beta).collect());
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;

        for k in 0..m {
            if iterations >= config.max_iterations {
                break 'outer;
            }
            iterations += 1;

            // w = M^-1 A v_k, modified Gram-Schmidt single pass
            let av = spmv(a, &basis[k])?;
            let mut w = precond.apply(a, &av);
            for j in 0..=k {
                h[j][k] = dot(&w, &basis[j]);
                axpy(&mut w, -h[j][k], &basis[j]);
            }
            let wnorm = norm2(&w);
            if !wnorm.is_finite() {
                return Err(Error::NonFinite {
                    context: "Arnoldi vector",
                });
            }
            h[k + 1][k] = wnorm;
            let breakdown = wnorm == 0.0;
            if !breakdown {
                basis.push(w.iter().map(|v| v / wnorm).collect());
            } else {
                basis.push(w);
            }

            for j in 0..k {
                let tmp = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = tmp;
            }
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            cs[k] = c;
            sn[k] = s;
            h[k][k] = c * h[k][k] + s * h[k + 1][k];
            h[k + 1][k] = 0.0;
            let tmp = c * g[k] + s * g[k + 1];
            g[k + 1] = -s * g[k] + c * g[k + 1];
            g[k] = tmp;

            // Form the candidate and record its true residual.
            let y = back_substitute(&h, &g, k + 1);
            let mut candidate = x.clone();
            for (j, &yj) in y.iter().enumerate() {
                axpy(&mut candidate, yj, &basis[j]);
            }
            let rc = residual(a, b, &candidate)?;
            let rcnorm = norm2(&rc);
            if !rcnorm.is_finite() {
                return Err(Error::NonFinite {
                    context: "GMRES candidate residual",
                });
            }
            history.push(rcnorm);
            if rcnorm < best_rnorm {
                best_rnorm = rcnorm;
                best_x = candidate.clone();
            }
            if rcnorm <= threshold {
                return Ok(SolveOutcome {
                    x: candidate,
                    converged: true,
                    iterations,
                    residual_history: history,
                });
            }

            let at_cycle_end = breakdown || k + 1 == m;
            if at_cycle_end {
                if rcnorm > rnorm {
                    log::debug!(
                        "GMRES restart residual increased: {rnorm:.3e} -> {rcnorm:.3e}"
                    );
                }
                x = candidate;
                r = rc;
                rnorm = rcnorm;
                continue 'outer;
            }
        }
    }

    Ok(SolveOutcome {
        x: best_x,
        converged: false,
        iterations,
        residual_history: history,
    })
}

fn back_substitute(h: &[Vec<f64>], g: &[f64], size: usize) -> Vec<f64> {
    let mut y = vec![0.0; size];
    for i in (0..size).rev() {
        let mut s = g[i];
        for j in i + 1..size {
            s -= h[i][j] * y[j];
        }
        y[i] = s / h[i][i];
    }
    y
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else if a.abs() > b.abs() {
        let t = b / a;
        let c = 1.0 / (1.0 + t * t).sqrt();
        (c, c * t)
    } else {
        let t = a / b;
        let s = 1.0 / (1.0 + t * t).sqrt();
        (s * t, s)
    }
}
