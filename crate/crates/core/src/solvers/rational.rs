//! Rational Arnoldi (RA), Riley's iterated regularization, and the
//! Tikhonov-regularized variant (RAT).
//!
//! All three recover `x = A^{-1} b` from systems shifted by `λ`. With
//! `Z = (A + λI)^{-1}` the exact solution is `f(Z) b` for
//! `f(z) = z / (1 − λz)`. RA approximates `f(Z)b` by Arnoldi projection
//! onto `K_m(Z, b)`; Riley sums the Taylor series of `f` about zero.

use super::operators::{RatOperator, ShiftInvertOperator};
use super::report::{HistoryRecorder, SolveOptions, SolveReport, StopReason};
use crate::error::{Error, Result};
use crate::krylov::{ArnoldiDecomposition, LinearOperator};
use crate::linalg::{axpy, cholesky_factor, lu_factor, norm2, scale, DenseMatrix, DenseVector};

/// `y = f(H) e₁` with `f(z) = (1 − λz)^{-1} z`, i.e. the solution of
/// `(I − λH) y = H e₁`.
pub fn eval_f_small(h: &DenseMatrix, lambda: f64) -> Result<DenseVector> {
    let m = h.require_square()?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let rhs = h.column(0);
    let system = DenseMatrix::from_fn(m, m, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - lambda * h[(i, j)]
    });
    let f = lu_factor(&system).map_err(|_| Error::SingularRationalEvaluation {
        inv_lambda: 1.0 / lambda,
    })?;
    let y = f.solve(&rhs)?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularRationalEvaluation {
            inv_lambda: 1.0 / lambda,
        });
    }
    Ok(y)
}

fn check_system(a: &DenseMatrix, b: &[f64], x_true: Option<&[f64]>) -> Result<usize> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    if let Some(xt) = x_true {
        if xt.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: xt.len(),
            });
        }
    }
    if !(norm2(b) > 0.0) {
        return Err(Error::InvalidArgument(
            "right-hand side must be nonzero".into(),
        ));
    }
    Ok(n)
}

/// Drives Arnoldi on `op` from `start`, forming `x_m = ‖start‖ V_m f(H_m) e₁`
/// at every step.
fn arnoldi_refinement(
    method: &str,
    op: &dyn LinearOperator,
    start: &[f64],
    lambda: f64,
    opts: &SolveOptions,
    mut recorder: HistoryRecorder<'_>,
) -> Result<SolveReport> {
    let n = op.dimension();
    let limit = opts.iteration_limit(n).min(n);
    let mut d = ArnoldiDecomposition::start(op, start)?;
    let mut reason = StopReason::MaxIter;
    for m in 1..=limit {
        d = d.extend(op)?;
        let y = match eval_f_small(d.hessenberg(), lambda) {
            Ok(y) => y,
            Err(Error::SingularRationalEvaluation { .. }) => {
                reason = StopReason::EvaluationFailure;
                break;
            }
            Err(e) => return Err(e),
        };
        let mut x = d.combine(&y);
        scale(&mut x, d.beta());
        if x.iter().any(|v| !v.is_finite()) {
            reason = StopReason::Diverged;
            break;
        }
        let res = recorder.record(m, &x);
        if d.breakdown() {
            reason = StopReason::Breakdown;
            break;
        }
        if opts.residual_tol.is_some_and(|tol| res <= tol) {
            reason = StopReason::ResidualTol;
            break;
        }
    }
    Ok(recorder.finish(method, Some(lambda), reason))
}

/// Rational Arnoldi solve of `A x = b` with shift `λ`.
///
/// `A + λI` is factored once; each step costs one pair of triangular solves.
pub fn ra_solve(
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    opts: &SolveOptions,
    x_true: Option<&[f64]>,
) -> Result<SolveReport> {
    check_system(a, b, x_true)?;
    let op = ShiftInvertOperator::new(a, lambda)?;
    let recorder = HistoryRecorder::new(a, b, x_true);
    arnoldi_refinement("ra", &op, b, lambda, opts, recorder)
}

/// Riley's recursion `x_{k+1} = Zb + λ Z x_k`, `x_0 = 0`.
pub fn riley_solve(
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    opts: &SolveOptions,
    x_true: Option<&[f64]>,
) -> Result<SolveReport> {
    let n = check_system(a, b, x_true)?;
    let op = ShiftInvertOperator::new(a, lambda)?;
    let mut recorder = HistoryRecorder::new(a, b, x_true);
    let y = op.apply(b);
    let mut x = vec![0.0; n];
    let mut reason = StopReason::MaxIter;
    for k in 1..=opts.iteration_limit(n) {
        let mut next = op.apply(&x);
        scale(&mut next, lambda);
        axpy(&mut next, 1.0, &y);
        x = next;
        if x.iter().any(|v| !v.is_finite()) {
            reason = StopReason::Diverged;
            break;
        }
        let res = recorder.record(k, &x);
        if opts.residual_tol.is_some_and(|tol| res <= tol) {
            reason = StopReason::ResidualTol;
            break;
        }
    }
    Ok(recorder.finish("riley", Some(lambda), reason))
}

/// Rational Arnoldi on `Q = (AᵀA + λHᵀH)^{-1} HᵀH`, started from the solution
/// `v` of `HᵀH v = Aᵀ b_obs`. Residuals are measured against `b_obs`.
pub fn rat_solve(
    a: &DenseMatrix,
    b_obs: &[f64],
    reg: &DenseMatrix,
    lambda: f64,
    opts: &SolveOptions,
    x_true: Option<&[f64]>,
) -> Result<SolveReport> {
    check_system(a, b_obs, x_true)?;
    let start = rat_start_vector(a, b_obs, reg)?;
    let op = RatOperator::new(a, reg, lambda)?;
    let recorder = HistoryRecorder::new(a, b_obs, x_true);
    arnoldi_refinement("rat", &op, &start, lambda, opts, recorder)
}

/// The RAT starting vector: `v` solving `(HᵀH) v = Aᵀ b`.
pub fn rat_start_vector(a: &DenseMatrix, b: &[f64], reg: &DenseMatrix) -> Result<DenseVector> {
    let gram = cholesky_factor(&reg.gram())?;
    gram.solve(&a.matvec_transpose(b))
}

/// The `N × N` tridiagonal regularization matrix with 2 on the diagonal and
/// −1 beside it.
pub fn second_difference_matrix(n: usize) -> Result<DenseMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "second-difference matrix needs N >= 2, got {n}"
        )));
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{extreme_eigs_spd, relative_distance, sub};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        let b = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        b.gram().shifted(0.5)
    }

    #[test]
    fn eval_f_scalar_and_zero_shift() {
        let h = DenseMatrix::from_rows(&[[0.5]]);
        assert!((eval_f_small(&h, 1.0).unwrap()[0] - 1.0).abs() < 1e-15);

        let h = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [0.5, 1.0, 1.0], [0.0, 0.25, 2.0]]);
        assert_eq!(eval_f_small(&h, 0.0).unwrap(), h.column(0));

        let (a, b) = (0.3, 0.7);
        let h = DenseMatrix::from_diagonal(&[a, b]);
        let y = eval_f_small(&h, 2.0).unwrap();
        assert!((y[0] - a / (1.0 - 2.0 * a)).abs() < 1e-15);
        assert_eq!(y[1], 0.0);
    }

    #[test]
    fn eval_f_detects_pole() {
        let h = DenseMatrix::from_rows(&[[0.5]]);
        assert!(matches!(
            eval_f_small(&h, 2.0),
            Err(Error::SingularRationalEvaluation { .. })
        ));
    }

    #[test]
    fn ra_is_exact_in_one_dimension() {
        let a = DenseMatrix::from_rows(&[[4.0]]);
        for lambda in [1e-6, 0.3, 10.0] {
            let rep = ra_solve(&a, &[2.0], lambda, &SolveOptions::default(), Some(&[0.5])).unwrap();
            assert_eq!(rep.history.len(), 1);
            assert!((rep.best_x[0] - 0.5).abs() <= 1e-14 * 0.5);
        }
    }

    #[test]
    fn ra_first_iterate_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_spd(8, &mut rng);
        let b: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lambda = 0.2;
        let rep = ra_solve(&a, &b, lambda, &SolveOptions::with_max_iter(1), None).unwrap();
        let beta = norm2(&b);
        let v1: Vec<f64> = b.iter().map(|x| x / beta).collect();
        let zv1 = lu_factor(&a.shifted(lambda)).unwrap().solve(&v1).unwrap();
        let h11: f64 = v1.iter().zip(&zv1).map(|(p, q)| p * q).sum();
        let expect: Vec<f64> = v1
            .iter()
            .map(|v| beta * h11 / (1.0 - lambda * h11) * v)
            .collect();
        assert!(relative_distance(&rep.best_x, &expect) < 1e-13);
    }

    #[test]
    fn riley_first_iterate_is_shifted_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_spd(6, &mut rng);
        let b: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rep = riley_solve(&a, &b, 0.1, &SolveOptions::with_max_iter(1), None).unwrap();
        let direct = lu_factor(&a.shifted(0.1)).unwrap().solve(&b).unwrap();
        assert!(relative_distance(&rep.best_x, &direct) < 1e-13);
    }

    #[test]
    fn ra_stops_on_residual_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_spd(15, &mut rng);
        let b: Vec<f64> = (0..15).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let opts = SolveOptions {
            max_iter: None,
            residual_tol: Some(1e-6),
        };
        let rep = ra_solve(&a, &b, 0.05, &opts, None).unwrap();
        assert_eq!(rep.stopped_reason, StopReason::ResidualTol);
        assert!(rep.history.last().unwrap().residual_norm <= 1e-6);
    }

    #[test]
    fn rational_identity_holds_each_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_spd(20, &mut rng);
        let b: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lambda = 0.1;
        let op = ShiftInvertOperator::new(&a, lambda).unwrap();
        let mut d = ArnoldiDecomposition::start(&op, &b).unwrap();
        for _ in 0..12 {
            d = d.extend(&op).unwrap();
            let h = d.hessenberg();
            let y = eval_f_small(h, lambda).unwrap();
            let lhs = sub(
                &y,
                &h.matvec(&y).iter().map(|v| lambda * v).collect::<Vec<_>>(),
            );
            assert!(relative_distance(&lhs, &h.column(0)) < 1e-12);
        }
    }

    #[test]
    fn second_difference_examples() {
        let h3 = second_difference_matrix(3).unwrap();
        assert_eq!(
            h3,
            DenseMatrix::from_rows(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])
        );
        assert_eq!(
            second_difference_matrix(2).unwrap(),
            DenseMatrix::from_rows(&[[2.0, -1.0], [-1.0, 2.0]])
        );
        assert!(second_difference_matrix(1).is_err());
    }

    #[test]
    fn second_difference_spectrum() {
        for n in [2usize, 5, 16, 33] {
            let h = second_difference_matrix(n).unwrap();
            let f = cholesky_factor(&h).unwrap();
            let est = extreme_eigs_spd(
                &|v: &[f64]| h.matvec(v),
                &|v: &[f64]| f.solve(v).unwrap(),
                n,
                1e-13,
                200_000,
            );
            let theta = std::f64::consts::PI / (n as f64 + 1.0);
            let lo = 2.0 - 2.0 * theta.cos();
            let hi = 2.0 - 2.0 * (n as f64 * theta).cos();
            assert!((est.lambda_min / lo - 1.0).abs() < 1e-6, "n={n}");
            assert!((est.lambda_max / hi - 1.0).abs() < 1e-6, "n={n}");
            assert!(est.lambda_min > 0.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = DenseMatrix::identity(3);
        let opts = SolveOptions::default();
        assert!(ra_solve(&a, &[0.0; 3], 1.0, &opts, None).is_err());
        assert!(ra_solve(&a, &[1.0; 2], 1.0, &opts, None).is_err());
        assert!(ra_solve(&a, &[1.0; 3], 0.0, &opts, None).is_err());
        assert!(riley_solve(&DenseMatrix::zeros(2, 3), &[1.0; 2], 1.0, &opts, None).is_err());
    }
}
