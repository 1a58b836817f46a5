//! The end-to-end local solve: build a local domain, solve the subsystem on
//! it, assemble the combined iterate, smooth it on the global system, and
//! finish with a global solve only when the smoothed iterate does not
//! already satisfy the convergence criterion.

use std::time::{Duration, Instant};

use crate::domain::{build_gradient_domain, build_residual_domain, LocalDomain};
use crate::error::{Error, Result};
use crate::krylov::{gauss_seidel_sweeps, gmres_solve, SolveOutcome, SolverConfig};
use crate::partition::{extract_partition, scatter_assemble, PartitionedSystem};
use crate::sparse::{norm2, residual, spmv, DenseVector, SparseMatrix};

/// A square linear system bundled with its initial iterate and the
/// convergence tolerance it is to be solved to.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub matrix: SparseMatrix,
    pub rhs: DenseVector,
    pub initial_iterate: DenseVector,
    pub tolerance: f64,
}

/// Which solver variant to run. The numbered labels follow the convention
/// baseline = method0, gradient = method1, residual = method2.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodSelector {
    /// Plain preconditioned GMRES on the global system.
    Baseline,
    /// Local solve with the gradient-built domain.
    GradientLocal {
        alpha: f64,
        smoothing_sweeps: usize,
    },
    /// Local solve with the residual-built domain.
    ResidualLocal {
        max_expansions: usize,
        smoothing_sweeps: usize,
    },
}

impl MethodSelector {
    pub fn baseline() -> Self {
        MethodSelector::Baseline
    }

    /// Gradient strategy with the default single smoothing sweep.
    pub fn gradient(alpha: f64) -> Self {
        MethodSelector::GradientLocal {
            alpha,
            smoothing_sweeps: 1,
        }
    }

    /// Residual strategy with the default single smoothing sweep.
    pub fn residual(max_expansions: usize) -> Self {
        MethodSelector::ResidualLocal {
            max_expansions,
            smoothing_sweeps: 1,
        }
    }

    pub fn with_smoothing_sweeps(self, sweeps: usize) -> Self {
        match self {
            MethodSelector::Baseline => MethodSelector::Baseline,
            MethodSelector::GradientLocal { alpha, .. } => MethodSelector::GradientLocal {
                alpha,
                smoothing_sweeps: sweeps,
            },
            MethodSelector::ResidualLocal { max_expansions, .. } => {
                MethodSelector::ResidualLocal {
                    max_expansions,
                    smoothing_sweeps: sweeps,
                }
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MethodSelector::Baseline => "method0",
            MethodSelector::GradientLocal { .. } => "method1",
            MethodSelector::ResidualLocal { .. } => "method2",
        }
    }

    pub fn smoothing_sweeps(&self) -> usize {
        match self {
            MethodSelector::Baseline => 0,
            MethodSelector::GradientLocal {
                smoothing_sweeps, ..
            }
            | MethodSelector::ResidualLocal {
                smoothing_sweeps, ..
            } => *smoothing_sweeps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MethodSelector::GradientLocal { alpha, .. } = self {
            if !(0.0..=1.0).contains(alpha) {
                return Err(Error::InvalidParameter(format!(
                    "alpha must lie in [0, 1], got {alpha}"
                )));
            }
        }
        Ok(())
    }
}

/// Wall times of the solve phases; `total` wraps the whole call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub total: Duration,
    pub domain_construction: Duration,
    pub subsystem_solve: Duration,
    pub smoothing: Duration,
    pub global_solve: Duration,
}

/// Everything observed during one solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: MethodSelector,
    /// Global dimension N.
    pub n: usize,
    /// Local-domain size K (0 for the baseline).
    pub subsystem_size: usize,
    /// K / N.
    pub eta: f64,
    /// Whether the smoothed assembled iterate already satisfied the
    /// convergence criterion, making the global solve unnecessary.
    pub converged_after_local: bool,
    pub subsystem_outcome: Option<SolveOutcome>,
    pub global_outcome: Option<SolveOutcome>,
    pub timings: PhaseTimings,
    /// Final iterate.
    pub x: DenseVector,
}

impl SolveReport {
    /// Did the solve end with an iterate satisfying the criterion?
    pub fn converged(&self) -> bool {
        self.converged_after_local
            || self
                .global_outcome
                .as_ref()
                .map(|o| o.converged)
                .unwrap_or(false)
    }

    pub fn subsystem_iterations(&self) -> usize {
        self.subsystem_outcome
            .as_ref()
            .map(|o| o.iterations)
            .unwrap_or(0)
    }

    pub fn global_iterations(&self) -> usize {
        self.global_outcome
            .as_ref()
            .map(|o| o.iterations)
            .unwrap_or(0)
    }
}

/// `||b - A x||_2 <= eps * ||b||_2`, absolute when `||b||_2 = 0`.
pub fn check_convergence(a: &SparseMatrix, b: &[f64], x: &[f64], eps: f64) -> Result<bool> {
    let rnorm = norm2(&residual(a, b, x)?);
    let bnorm = norm2(b);
    Ok(if bnorm > 0.0 {
        rnorm <= eps * bnorm
    } else {
        rnorm <= eps
    })
}

/// Solve the local subsystem `B x = b_local - E x0_complement` starting from
/// the local half of the initial iterate.
pub fn solve_local_subsystem(
    part: &PartitionedSystem,
    config: &SolverConfig,
) -> Result<SolveOutcome> {
    let coupled = spmv(&part.local_to_complement, &part.x0_complement)?;
    let rhs: DenseVector = part
        .rhs_local
        .iter()
        .zip(&coupled)
        .map(|(&bi, &ci)| bi - ci)
        .collect();
    gmres_solve(&part.local_block, &rhs, &part.x0_local, config)
}

/// Run the selected method on `A x = b` from `x0`.
///
/// The baseline selector calls GMRES directly and nothing else. The local
/// selectors build the domain, solve the subsystem (an empty domain skips
/// straight to smoothing), assemble, smooth with the configured number of
/// global Gauss-Seidel sweeps, check convergence, and only then fall back to
/// a global solve started from the assembled iterate. A non-converged
/// subsystem solve still contributes its best iterate; the global phase is
/// the safety net.
pub fn local_character_solve(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    selector: &MethodSelector,
    config: &SolverConfig,
) -> Result<SolveReport> {
    selector.validate()?;
    config.validate()?;
    let n = a.square_dim("local solve")?;

    let start = Instant::now();
    if matches!(selector, MethodSelector::Baseline) {
        let t = Instant::now();
        let outcome = gmres_solve(a, b, x0, config)?;
        let global_solve = t.elapsed();
        let x = outcome.x.clone();
        return Ok(SolveReport {
            method: selector.clone(),
            n,
            subsystem_size: 0,
            eta: 0.0,
            converged_after_local: false,
            subsystem_outcome: None,
            global_outcome: Some(outcome),
            timings: PhaseTimings {
                total: start.elapsed(),
                global_solve,
                ..PhaseTimings::default()
            },
            x,
        });
    }

    let t = Instant::now();
    let domain: LocalDomain = match selector {
        MethodSelector::GradientLocal { alpha, .. } => {
            build_gradient_domain(a, x0, *alpha)?.0
        }
        MethodSelector::ResidualLocal { max_expansions, .. } => {
            build_residual_domain(a, b, x0, config.tolerance, *max_expansions)?.0
        }
        MethodSelector::Baseline => unreachable!(),
    };
    let domain_construction = t.elapsed();
    let k = domain.len();

    let mut subsystem_outcome = None;
    let mut subsystem_solve = Duration::default();
    let mut x_tilde = if k > 0 {
        let t = Instant::now();
        let part = extract_partition(a, b, x0, &domain)?;
        let outcome = solve_local_subsystem(&part, config)?;
        let assembled = scatter_assemble(&domain, &outcome.x, &part.x0_complement)?;
        subsystem_solve = t.elapsed();
        // The expansion bound assumes the local solution moves by no more
        // than the size of the initial value; violations are only reported.
        let violations = domain
            .indices()
            .iter()
            .zip(&outcome.x)
            .filter(|(&i, &xi)| (xi - x0[i]).abs() > x0[i].abs())
            .count();
        if violations > 0 {
            log::debug!(
                "local solve moved {violations}/{k} components by more than their initial magnitude"
            );
        }
        subsystem_outcome = Some(outcome);
        assembled
    } else {
        x0.to_vec()
    };

    let sweeps = selector.smoothing_sweeps();
    let t = Instant::now();
    if sweeps > 0 {
        x_tilde = gauss_seidel_sweeps(a, b, &x_tilde, sweeps)?;
    }
    let smoothing = t.elapsed();

    let converged_after_local = check_convergence(a, b, &x_tilde, config.tolerance)?;
    let (global_outcome, global_solve, x) = if converged_after_local {
        (None, Duration::default(), x_tilde)
    } else {
        let t = Instant::now();
        let outcome = gmres_solve(a, b, &x_tilde, config)?;
        let elapsed = t.elapsed();
        let x = outcome.x.clone();
        (Some(outcome), elapsed, x)
    };

    Ok(SolveReport {
        method: selector.clone(),
        n,
        subsystem_size: k,
        eta: k as f64 / n as f64,
        converged_after_local,
        subsystem_outcome,
        global_outcome,
        timings: PhaseTimings {
            total: start.elapsed(),
            domain_construction,
            subsystem_solve,
            smoothing,
            global_solve,
        },
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_initial_iterate, example_matrix, example_rhs};
    use crate::krylov::Preconditioner;

    fn config(tolerance: f64) -> SolverConfig {
        SolverConfig {
            tolerance,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn check_convergence_basics() {
        let a = example_matrix();
        let x = crate::fixtures::example_solution();
        let b = spmv(&a, &x).unwrap();
        assert!(check_convergence(&a, &b, &x, 1e-12).unwrap());
        assert!(!check_convergence(&a, &b, &[0.0; 9], 0.5).unwrap());
        // Example initial iterate: ||r0|| ~ 0.93 >> eps * ||b||
        assert!(!check_convergence(&a, &b, &example_initial_iterate(), 1e-5).unwrap());
    }

    #[test]
    fn subsystem_on_full_domain_equals_global_solve() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let domain = LocalDomain::full(9);
        let part = extract_partition(&a, &b, &x0, &domain).unwrap();
        let sub = solve_local_subsystem(&part, &config(1e-10)).unwrap();
        let global = gmres_solve(&a, &b, &x0, &config(1e-10)).unwrap();
        assert_eq!(sub, global);
    }

    #[test]
    fn subsystem_on_diagonal_matrix() {
        let entries: Vec<_> = (0..6).map(|i| (i, i, (i + 1) as f64)).collect();
        let a = SparseMatrix::from_triplets(6, 6, &entries).unwrap();
        let b: Vec<f64> = (0..6).map(|i| (i + 1) as f64 * 2.0).collect();
        let domain = LocalDomain::new(6, vec![1, 4]).unwrap();
        let part = extract_partition(&a, &b, &[0.0; 6], &domain).unwrap();
        let sub = solve_local_subsystem(&part, &config(1e-12)).unwrap();
        assert!(sub.converged);
        assert!(sub.iterations <= 1);
        for xi in &sub.x {
            assert!((xi - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn baseline_is_bitwise_direct_gmres() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let cfg = config(1e-8);
        let report =
            local_character_solve(&a, &b, &x0, &MethodSelector::baseline(), &cfg).unwrap();
        let direct = gmres_solve(&a, &b, &x0, &cfg).unwrap();
        assert_eq!(report.x, direct.x);
        assert_eq!(report.global_outcome.unwrap(), direct);
        assert_eq!(report.subsystem_size, 0);
        assert_eq!(report.eta, 0.0);
    }

    #[test]
    fn residual_method_on_example() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let cfg = config(1e-5);
        let report =
            local_character_solve(&a, &b, &x0, &MethodSelector::residual(6), &cfg).unwrap();
        assert_eq!(report.subsystem_size, 6);
        assert!((report.eta - 6.0 / 9.0).abs() < 1e-15);
        assert!(report.converged());
        assert!(check_convergence(&a, &b, &report.x, 1e-5).unwrap());
    }

    #[test]
    fn already_converged_iterate_takes_local_exit() {
        let a = example_matrix();
        let x = crate::fixtures::example_solution();
        let b = spmv(&a, &x).unwrap();
        let report =
            local_character_solve(&a, &b, &x, &MethodSelector::residual(6), &config(1e-5))
                .unwrap();
        assert_eq!(report.subsystem_size, 0);
        assert!(report.converged_after_local);
        assert!(report.global_outcome.is_none());
        assert!(report.subsystem_outcome.is_none());
    }

    #[test]
    fn gradient_method_converges() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let cfg = config(1e-5);
        let report =
            local_character_solve(&a, &b, &x0, &MethodSelector::gradient(1e-4), &cfg).unwrap();
        assert!(report.converged());
        assert!(check_convergence(&a, &b, &report.x, 1e-5).unwrap());
    }

    #[test]
    fn invalid_alpha_rejected() {
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let sel = MethodSelector::GradientLocal {
            alpha: 2.0,
            smoothing_sweeps: 1,
        };
        assert!(local_character_solve(&a, &b, &x0, &sel, &config(1e-5)).is_err());
    }

    #[test]
    fn phase_timings_fit_inside_total() {
        // total wraps the whole call; 5% slack for clock granularity
        let a = example_matrix();
        let b = example_rhs();
        let x0 = example_initial_iterate();
        let report =
            local_character_solve(&a, &b, &x0, &MethodSelector::residual(6), &config(1e-5))
                .unwrap();
        let parts = report.timings.domain_construction + report.timings.subsystem_solve;
        assert!(report.timings.total.as_secs_f64() * 1.05 >= parts.as_secs_f64());
    }

    #[test]
    fn method_labels() {
        assert_eq!(MethodSelector::baseline().label(), "method0");
        assert_eq!(MethodSelector::gradient(0.1).label(), "method1");
        assert_eq!(MethodSelector::residual(1).label(), "method2");
    }

    #[test]
    fn zero_diagonal_under_sgs_is_reported() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let err = local_character_solve(
            &a,
            &[1.0, 1.0],
            &[0.0, 0.0],
            &MethodSelector::residual(1),
            &SolverConfig {
                tolerance: 1e-8,
                preconditioner: Preconditioner::SymmetricGaussSeidel,
                ..SolverConfig::default()
            },
        );
        assert!(matches!(err, Err(Error::ZeroDiagonal { .. })));
    }
}
