//! Error bounds, shift selection and conditioning estimates.

mod aposteriori;
mod bounds;
mod lambda;

pub use aposteriori::{aposteriori_exact_error, aposteriori_relative_bound};
pub use bounds::{
    apriori_bound, interval_map, mbar_for, rhat, AprioriBound, IntervalMap, CROUZEIX_CONSTANT,
    SYMMETRIC_CONSTANT,
};
pub use lambda::{
    cond_bound_spd, convergence_factor, lambda_heuristic, lambda_star, shifted_condition_spd,
    LambdaHeuristic,
};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_factor, extreme_eigs_spd, lu_factor, DenseMatrix, SpectralEstimate};

const EIG_TOL: f64 = 1e-10;
const EIG_MAX_ITER: usize = 5_000;

/// Extreme eigenvalues of a symmetric positive definite matrix.
pub fn spd_spectrum(a: &DenseMatrix) -> Result<SpectralEstimate> {
    let n = a.require_square()?;
    let f = cholesky_factor(a)?;
    let est = extreme_eigs_spd(
        &|v: &[f64]| a.matvec(v),
        &|v: &[f64]| f.solve(v).expect("dimension checked"),
        n,
        EIG_TOL,
        EIG_MAX_ITER,
    );
    if !(est.lambda_min > 0.0) {
        return Err(Error::Domain(format!(
            "smallest eigenvalue estimate {:e} is not positive",
            est.lambda_min
        )));
    }
    Ok(est)
}

/// Extreme eigenvalues of `AᵀA`, applied as `Aᵀ(A v)` and `A^{-1}A^{-ᵀ} v`
/// through one LU factorization of `A`.
pub fn normal_spectrum(a: &DenseMatrix) -> Result<SpectralEstimate> {
    let n = a.require_square()?;
    let f = lu_factor(a)?;
    Ok(extreme_eigs_spd(
        &|v: &[f64]| a.matvec_transpose(&a.matvec(v)),
        &|v: &[f64]| {
            let w = f.solve_transpose(v).expect("dimension checked");
            f.solve(&w).expect("dimension checked")
        },
        n,
        EIG_TOL,
        EIG_MAX_ITER,
    ))
}

/// 2-norm condition estimate `√(λ_max(AᵀA)/λ_min(AᵀA))`, saturating at
/// infinity when the smallest estimate underflows.
pub fn condition_estimate(a: &DenseMatrix) -> Result<f64> {
    let est = normal_spectrum(a)?;
    if est.lambda_min > 0.0 {
        Ok((est.lambda_max / est.lambda_min).sqrt().max(1.0))
    } else {
        Ok(f64::INFINITY)
    }
}
