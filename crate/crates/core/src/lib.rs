//! Sparse iterative solvers accelerated by local-domain subsystem solves.
//!
//! Sequences of linear systems from implicit time stepping tend to change
//! only on a small set of components between consecutive solves. This crate
//! builds that set (the local domain) from either an l1-style gradient of
//! the initial iterate or from the componentwise initial residual, solves
//! the subsystem restricted to it, and uses the assembled result as a
//! near-converged initial iterate for the global system — often good enough
//! that one Gauss-Seidel sweep finishes the solve outright.
//!
//! The crate ships the full stack needed to study the approach: CSR
//! matrices with Matrix Market I/O, restarted GMRES with Jacobi and
//! symmetric Gauss-Seidel preconditioning, both domain-construction
//! strategies, the end-to-end driver, and a 2D nonlinear heat-conduction
//! generator that produces realistic solve sequences.

pub mod domain;
pub mod error;
pub mod heat;
pub mod krylov;
pub mod market;
pub mod partition;
pub mod solve;
pub mod sparse;
pub mod synth;

#[cfg(test)]
mod fixtures;

pub use error::{Error, Result};
pub use sparse::{DenseVector, SparseMatrix};
