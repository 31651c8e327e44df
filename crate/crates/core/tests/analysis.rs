mod common;

use common::{geomspace, random_vector, rng, spd_with_spectrum};
use proptest::prelude::*;
use ratarnoldi::analysis::{
    aposteriori_exact_error, aposteriori_relative_bound, apriori_bound, interval_map, rhat,
    spd_spectrum,
};
use ratarnoldi::krylov::ArnoldiDecomposition;
use ratarnoldi::linalg::{cholesky_factor, norm2, sub, DenseMatrix};
use ratarnoldi::problems::{generate_fredholm, FredholmKind};
use ratarnoldi::solvers::{eval_f_small, ra_solve, ShiftInvertOperator};
use ratarnoldi::SolveOptions;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rhat_decreases_in_lambda(log_l1 in -8.0f64..-1.0, span in 1.0f64..8.0) {
        let l1 = 10f64.powf(log_l1);
        let ln = l1 * 10f64.powf(span);
        let mut prev = f64::INFINITY;
        for k in 0..25 {
            let lambda = 10f64.powf(-10.0 + 0.5 * k as f64);
            let r = rhat(&interval_map(l1, ln, lambda).unwrap()).unwrap();
            prop_assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn relative_estimate_tracks_true_error(seed in any::<u64>()) {
        let mut r = rng(seed);
        let eigs = geomspace(1e-3, 1.0, 12);
        let a = spd_with_spectrum(&eigs, &mut r);
        let b = random_vector(12, &mut r);
        let lambda = 0.1;
        let fa = cholesky_factor(&a).unwrap();
        let x = fa.solve(&b).unwrap();
        let op = ShiftInvertOperator::new(&a, lambda).unwrap();
        let mut d = ArnoldiDecomposition::start(&op, &b).unwrap();
        for _ in 0..5 {
            d = d.extend(&op).unwrap();
            let y = eval_f_small(d.hessenberg(), lambda).unwrap();
            let xm: Vec<f64> = d.combine(&y).iter().map(|v| v * d.beta()).collect();
            let rel = norm2(&sub(&xm, &x)) / norm2(&x);
            let est = aposteriori_relative_bound(&d, &a, lambda).unwrap();
            let exact = aposteriori_exact_error(&d, &a, &fa, lambda).unwrap() / norm2(&x);
            prop_assert!((exact / rel - 1.0).abs() < 1e-6);
            // action on b, not the operator norm: an estimate, not a guaranteed bound
            prop_assert!(est / rel > 0.1 && est / rel < 100.0, "m={} est {est:e} rel {rel:e}", d.m());
        }
    }
}

#[test]
fn apriori_bound_dominates_on_diagonal_spectra() {
    for (kappa, n, lambda) in [(1e2, 20, 0.1), (1e4, 30, 1e-2), (1e6, 40, 1e-3)] {
        let eigs = geomspace(1.0 / kappa, 1.0, n);
        let a = DenseMatrix::from_diagonal(&eigs);
        let b: Vec<f64> = (0..n).map(|i| 1.0 + 0.3 * (i as f64).cos()).collect();
        let xt: Vec<f64> = b.iter().zip(&eigs).map(|(bi, e)| bi / e).collect();
        let rep = ra_solve(&a, &b, lambda, &SolveOptions::default(), Some(&xt)).unwrap();
        let bound = apriori_bound(&interval_map(eigs[0], eigs[n - 1], lambda).unwrap()).unwrap();
        for rec in &rep.history {
            let e = rec.error_norm.unwrap() * norm2(&xt);
            assert!(
                e <= bound.error_bound(rec.m, 1.0) * norm2(&b),
                "κ={kappa:e} m={}",
                rec.m
            );
        }
    }
}

#[test]
fn spd_spectrum_on_gravity_like_matrix() {
    let eigs = geomspace(1e-6, 3.0, 40);
    let a = spd_with_spectrum(&eigs, &mut rng(2));
    let est = spd_spectrum(&a).unwrap();
    assert!((est.lambda_min / 1e-6 - 1.0).abs() < 1e-6);
    assert!((est.lambda_max / 3.0 - 1.0).abs() < 1e-6);
}

#[test]
fn shaw_is_not_positive_definite() {
    let p = generate_fredholm(FredholmKind::Shaw, 64).unwrap();
    assert!(spd_spectrum(&p.a).is_err());
}

#[test]
fn minimum_error_has_interior_optimal_shift_on_baart() {
    let p = generate_fredholm(FredholmKind::Baart, 40).unwrap();
    let lambdas: Vec<f64> = (0..9).map(|k| 10f64.powf(-14.0 + k as f64 * 1.5)).collect();
    let mins: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            ra_solve(
                &p.a,
                &p.b,
                l,
                &SolveOptions::with_max_iter(40),
                p.x_true.as_deref(),
            )
            .unwrap()
            .min_error()
            .unwrap()
        })
        .collect();
    let (best, _) =
        mins.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    assert!(best > 0 && best < lambdas.len() - 1, "{mins:?}");
}
