//! Dense real linear algebra: storage, factorizations, spectral extremes and
//! Hessenberg determinants.

mod det;
mod factor;
mod matrix;
mod spectral;

pub use det::{hessenberg_det, hessenberg_det_scaled, ScaledReal};
pub use factor::{
    cholesky_factor, factor_auto, lu_factor, solve_factored, FactorKind, Factorization, PIVOT_FLOOR,
};
pub use matrix::{
    axpy, dot, norm2, relative_distance, scale, sub, DenseMatrix, DenseVector, SYMMETRY_TOL,
};
pub use spectral::{extreme_eigs_spd, SpectralEstimate};
