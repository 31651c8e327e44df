//! Reference Krylov solvers used for comparison: CG, full GMRES and CGLS.
//! All start from `x₀ = 0`.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, scale, DenseMatrix, DenseVector};
use crate::solvers::{HistoryRecorder, SolveOptions, SolveReport, StopReason};

fn check(a: &DenseMatrix, b: &[f64], x_true: Option<&[f64]>) -> Result<usize> {
    let n = a.require_square()?;
    for len in std::iter::once(b.len()).chain(x_true.map(<[f64]>::len)) {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    Ok(n)
}

/// Conjugate gradients. Aborts with [`Error::Indefinite`] on non-positive
/// curvature `pᵀAp ≤ 0`.
pub fn cg_solve(
    a: &DenseMatrix,
    b: &[f64],
    opts: &SolveOptions,
    x_true: Option<&[f64]>,
) -> Result<SolveReport> {
    let n = check(a, b, x_true)?;
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut rec = HistoryRecorder::new(a, b, x_true);
    let b_norm = norm2(b);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut reason = StopReason::MaxIter;
    for k in 1..=opts.iteration_limit(n) {
        if rr == 0.0 {
            reason = StopReason::Breakdown;
            break;
        }
        let ap = a.matvec(&p);
        let curvature = dot(&p, &ap);
        if !(curvature > 0.0) {
            return Err(Error::Indefinite {
                iteration: k,
                curvature,
            });
        }
        let alpha = rr / curvature;
        axpy(&mut x, alpha, &p);
        axpy(&mut r, -alpha, &ap);
        let rr_new = dot(&r, &r);
        let res = rec.record(k, &x);
        if rr_new == 0.0 {
            reason = StopReason::Breakdown;
            break;
        }
        if opts.residual_tol.is_some_and(|tol| res <= tol) {
            reason = StopReason::ResidualTol;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        if b_norm > 0.0 && rr.sqrt() / b_norm < 1e-300 {
            reason = StopReason::Breakdown;
            break;
        }
    }
    Ok(rec.finish("cg", None, reason))
}

/// Full (unrestarted) GMRES with Givens-rotation least squares.
pub fn gmres_solve(
    a: &DenseMatrix,
    b: &[f64],
    opts: &SolveOptions,
    x_true: Option<&[f64]>,
) -> Result<SolveReport> {
    let n = check(a, b, x_true)?;
    let mut rec = HistoryRecorder::new(a, b, x_true);
    let beta = norm2(b);
    if beta == 0.0 {
        rec.record(1, &vec![0.0; n]);
        return Ok(rec.finish("gmres", None, StopReason::Breakdown));
    }
    let limit = opts.iteration_limit(n).min(n);
    let mut basis: Vec<DenseVector> = Vec::with_capacity(limit + 1);
    let mut v1 = b.to_vec();
    scale(&mut v1, 1.0 / beta);
    basis.push(v1);
    // rotated Hessenberg columns (upper triangular R), stored by column
    let mut r_cols: Vec<DenseVector> = Vec::with_capacity(limit);
    let mut cs: Vec<f64> = Vec::with_capacity(limit);
    let mut sn: Vec<f64> = Vec::with_capacity(limit);
    let mut g = vec![beta];
    let mut reason = StopReason::MaxIter;

    for k in 1..=limit {
        let mut w = a.matvec(&basis[k - 1]);
        let w_norm = norm2(&w);
        let mut h = vec![0.0; k + 1];
        for _pass in 0..2 {
            for (j, vj) in basis.iter().enumerate() {
                let c = dot(vj, &w);
                axpy(&mut w, -c, vj);
                h[j] += c;
            }
        }
        h[k] = norm2(&w);
        let lucky = h[k] <= 1e-14 * w_norm;

        for j in 0..k - 1 {
            let t = cs[j] * h[j] + sn[j] * h[j + 1];
            h[j + 1] = -sn[j] * h[j] + cs[j] * h[j + 1];
            h[j] = t;
        }
        let (c, s) = givens(h[k - 1], h[k]);
        h[k - 1] = c * h[k - 1] + s * h[k];
        h[k] = 0.0;
        cs.push(c);
        sn.push(s);
        let gk = g[k - 1];
        g[k - 1] = c * gk;
        g.push(-s * gk);
        h.truncate(k);
        r_cols.push(h);

        // back substitution R y = g[..k]
        let mut y = g[..k].to_vec();
        for i in (0..k).rev() {
            let mut s = y[i];
            for j in (i + 1)..k {
                s -= r_cols[j][i] * y[j];
            }
            y[i] = s / r_cols[i][i];
        }
        let mut x = vec![0.0; n];
        for (vj, yj) in basis.iter().zip(&y) {
            axpy(&mut x, *yj, vj);
        }
        if x.iter().any(|v| !v.is_finite()) {
            reason = StopReason::Diverged;
            break;
        }
        let res = rec.record(k, &x);
        if lucky {
            reason = StopReason::Breakdown;
            break;
        }
        if opts.residual_tol.is_some_and(|tol| res <= tol) {
            reason = StopReason::ResidualTol;
            break;
        }
        let hk = norm2(&w);
        scale(&mut w, 1.0 / hk);
        basis.push(w);
    }
    Ok(rec.finish("gmres", None, reason))
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

/// CG on the normal equations `AᵀA x = Aᵀb` without forming `AᵀA`.
pub fn cgls_solve(
    a: &DenseMatrix,
    b: &[f64],
    opts: &SolveOptions,
    x_true: Option<&[f64]>,
) -> Result<SolveReport> {
    let n = check(a, b, x_true)?;
    let mut rec = HistoryRecorder::new(a, b, x_true);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut s = a.matvec_transpose(&r);
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let mut reason = StopReason::MaxIter;
    for k in 1..=opts.iteration_limit(n) {
        if gamma == 0.0 {
            reason = StopReason::Breakdown;
            break;
        }
        let q = a.matvec(&p);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            reason = StopReason::Breakdown;
            break;
        }
        let alpha = gamma / qq;
        axpy(&mut x, alpha, &p);
        axpy(&mut r, -alpha, &q);
        let res = rec.record(k, &x);
        s = a.matvec_transpose(&r);
        let gamma_new = dot(&s, &s);
        if opts.residual_tol.is_some_and(|tol| res <= tol) {
            reason = StopReason::ResidualTol;
            break;
        }
        if gamma_new == 0.0 {
            reason = StopReason::Breakdown;
            break;
        }
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    Ok(rec.finish("cgls", None, reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{lu_factor, relative_distance};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_converges_in_one_step() {
        let a = DenseMatrix::identity(4);
        let b = [1.0, -2.0, 3.0, 0.5];
        for rep in [
            cg_solve(&a, &b, &SolveOptions::default(), Some(&b)).unwrap(),
            gmres_solve(&a, &b, &SolveOptions::default(), Some(&b)).unwrap(),
            cgls_solve(&a, &b, &SolveOptions::default(), Some(&b)).unwrap(),
        ] {
            assert_eq!(rep.history.len(), 1, "{}", rep.method);
            assert!(rep.min_error().unwrap() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_matrix_cgls_one_step() {
        let (c, s) = (0.6, 0.8);
        let a = DenseMatrix::from_rows(&[[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]);
        let xt = [1.0, 2.0, -1.0];
        let b = a.matvec(&xt);
        let rep = cgls_solve(&a, &b, &SolveOptions::default(), Some(&xt)).unwrap();
        assert_eq!(rep.history.len(), 1);
        assert!(rep.min_error().unwrap() < 1e-14);
    }

    #[test]
    fn cg_terminates_after_distinct_eigenvalue_count() {
        let a = DenseMatrix::from_diagonal(&[1.0, 1.0, 3.0, 3.0, 3.0, 7.0, 7.0]);
        let xt = [1.0, -1.0, 2.0, 0.5, 1.0, -3.0, 1.0];
        let b = a.matvec(&xt);
        let rep = cg_solve(&a, &b, &SolveOptions::with_max_iter(7), Some(&xt)).unwrap();
        assert!(rep.history[2].error_norm.unwrap() < 1e-10);
    }

    #[test]
    fn cg_rejects_indefinite() {
        let a = DenseMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            cg_solve(&a, &[0.0, 1.0], &SolveOptions::default(), None),
            Err(Error::Indefinite { iteration: 1, .. })
        ));
    }

    #[test]
    fn gmres_full_dimension_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = DenseMatrix::from_fn(8, 8, |_, _| rng.gen_range(-1.0..1.0));
        let b: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rep = gmres_solve(&a, &b, &SolveOptions::default(), None).unwrap();
        assert!(rep.history.last().unwrap().residual_norm <= 1e-10);
    }

    #[test]
    fn monotone_natural_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let n = 25;
            let m = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let spd = m.gram().shifted(0.1);
            let xt: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

            let b = spd.matvec(&xt);
            let cg = cg_solve(&spd, &b, &SolveOptions::default(), Some(&xt)).unwrap();
            let a_norm_err = |x: &[f64]| {
                let e: Vec<f64> = x.iter().zip(&xt).map(|(p, q)| p - q).collect();
                dot(&e, &spd.matvec(&e)).sqrt()
            };
            let mut prev = f64::INFINITY;
            for k in 1..=cg.history.len() {
                let rep = cg_solve(&spd, &b, &SolveOptions::with_max_iter(k), Some(&xt)).unwrap();
                let e = a_norm_err(&rep.last_x);
                assert!(e <= prev * (1.0 + 1e-12) + 1e-12, "cg A-norm grew at {k}");
                prev = e;
            }

            let g = DenseMatrix::from_fn(n, n, |i, j| m[(i, j)] + if i == j { 3.0 } else { 0.0 });
            let b = g.matvec(&xt);
            let gm = gmres_solve(&g, &b, &SolveOptions::default(), Some(&xt)).unwrap();
            for w in gm.residuals().windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
            }
            let cgls = cgls_solve(&g, &b, &SolveOptions::default(), Some(&xt)).unwrap();
            for w in cgls.residuals().windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
            }
        }
    }

    #[test]
    fn all_agree_with_direct_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let m = DenseMatrix::from_fn(10, 10, |_, _| rng.gen_range(-1.0..1.0));
        let spd = m.gram().shifted(1.0);
        let b: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let direct = lu_factor(&spd).unwrap().solve(&b).unwrap();
        for rep in [
            cg_solve(&spd, &b, &SolveOptions::default(), Some(&direct)).unwrap(),
            gmres_solve(&spd, &b, &SolveOptions::default(), Some(&direct)).unwrap(),
            cgls_solve(&spd, &b, &SolveOptions::with_max_iter(40), Some(&direct)).unwrap(),
        ] {
            assert!(rep.min_error().unwrap() <= 1e-8, "{}", rep.method);
            assert!(relative_distance(&rep.best_x, &direct) <= 1e-8);
        }
    }
}
