//! Shift-and-invert (rational) Arnoldi solvers for ill-conditioned linear
//! systems.
//!
//! The central idea: with `Z = (A + λI)^{-1}` the solution of `A x = b` is
//! `x = f(Z) b` for `f(z) = z / (1 − λz)`, and `f(Z) b` is approximated from
//! the Krylov space `K_m(Z, b)` by [`solvers::ra_solve`]. Each step needs one
//! solve with `A + λI`, factored once up front.
//!
//! The crate also provides Riley's iterated regularization, the Tikhonov
//! variant with a general regularization matrix ([`solvers::rat_solve`]),
//! CG/GMRES/CGLS baselines, the classical Fredholm test problems and the
//! a-priori / a-posteriori error theory used to choose `λ`.

pub mod analysis;
pub mod baselines;
pub mod error;
pub mod krylov;
pub mod linalg;
pub mod problems;
pub mod solvers;

pub use error::{Error, Result};
pub use krylov::{ArnoldiDecomposition, LinearOperator};
pub use linalg::{DenseMatrix, DenseVector, Factorization, SpectralEstimate};
pub use problems::{NoiseSpec, TestProblem};
pub use solvers::{SolveOptions, SolveReport, StopReason};
