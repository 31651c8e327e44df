//! A-posteriori error representation of the rational Arnoldi iterate.
//!
//! With `q_m(ξ) = det(H_m − ξI)` and the Arnoldi identity
//! `q_m(Z) b = ±β ∏ h_{j+1,j} v_{m+1}`, the interpolation error of
//! `f(z) = z/(1 − λz)` at the Ritz values gives
//!
//! ```text
//! x − x_m = λ^{-1} A^{-1}(A + λI) q_m(Z) b / q_m(1/λ)
//! ‖x_m − x‖ = β ∏ h_{j+1,j} λ^{m−1} ‖A^{-1}(A + λI) v_{m+1}‖ / |det(λH_m − I)|
//! ```
//!
//! using `λ^m q_m(1/λ) = ±det(λH_m − I)`.

use crate::error::{Error, Result};
use crate::krylov::ArnoldiDecomposition;
use crate::linalg::{
    hessenberg_det_scaled, norm2, DenseMatrix, DenseVector, Factorization, ScaledReal,
};

fn shifted_apply(a: &DenseMatrix, lambda: f64, v: &[f64]) -> DenseVector {
    let mut w = a.matvec(v);
    for (wi, vi) in w.iter_mut().zip(v) {
        *wi += lambda * vi;
    }
    w
}

fn lambda_power(lambda: f64, k: usize) -> ScaledReal {
    (0..k).fold(ScaledReal::ONE, |acc, _| acc.mul_f64(lambda))
}

/// `∏ h_{j+1,j} / |det(λH_m − I)|` as a scaled real.
fn error_ratio(d: &ArnoldiDecomposition, lambda: f64) -> Result<ScaledReal> {
    let h = d.hessenberg();
    let m = d.m();
    let mut prod = ScaledReal::new(d.h_next());
    for j in 1..m {
        prod = prod.mul_f64(h[(j, j - 1)]);
    }
    let denom = hessenberg_det_scaled(&h.scaled(lambda), 1.0);
    if denom.mantissa == 0.0 || !denom.mantissa.is_finite() {
        return Err(Error::Domain(
            "q_m(1/λ) vanishes: 1/λ is an eigenvalue of H_m".into(),
        ));
    }
    Ok(prod
        * ScaledReal {
            mantissa: 1.0 / denom.mantissa.abs(),
            exponent: -denom.exponent,
        })
}

fn require_steps(d: &ArnoldiDecomposition) -> Result<()> {
    if d.m() == 0 {
        return Err(Error::InvalidArgument(
            "a-posteriori error needs at least one Arnoldi step".into(),
        ));
    }
    Ok(())
}

/// Exact error `‖x_m − A^{-1}b‖` from the decomposition alone, given a
/// factorization of `A` itself. Returns 0 at breakdown.
pub fn aposteriori_exact_error(
    d: &ArnoldiDecomposition,
    a: &DenseMatrix,
    a_factored: &Factorization,
    lambda: f64,
) -> Result<f64> {
    require_steps(d)?;
    let Some(v_next) = d.v_next() else {
        return Ok(0.0);
    };
    let ratio = error_ratio(d, lambda)?;
    let y = a_factored.solve(&shifted_apply(a, lambda, v_next))?;
    Ok((ratio * lambda_power(lambda, d.m() - 1))
        .mul_f64(d.beta() * norm2(&y))
        .to_f64())
}

/// Computable relative error estimate `‖(A+λI) q_m(Z) b‖ / (‖b‖ λ |q_m(1/λ)|)`,
/// the norm of the matrix polynomial replaced by its action on `b`. This is
/// an estimate of `‖x_m − x‖/‖x‖`, not a guaranteed upper bound.
pub fn aposteriori_relative_bound(
    d: &ArnoldiDecomposition,
    a: &DenseMatrix,
    lambda: f64,
) -> Result<f64> {
    require_steps(d)?;
    let Some(v_next) = d.v_next() else {
        return Ok(0.0);
    };
    let ratio = error_ratio(d, lambda)?;
    let w = shifted_apply(a, lambda, v_next);
    Ok((ratio * lambda_power(lambda, d.m() - 1))
        .mul_f64(norm2(&w))
        .to_f64())
}
