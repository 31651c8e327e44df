//! Extreme eigenvalues of SPD operators by power and inverse-power iteration.

use super::matrix::{dot, norm2, scale, DenseVector};

/// Smallest and largest eigenvalue estimates of an SPD operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

impl SpectralEstimate {
    /// `lambda_max / lambda_min`.
    pub fn condition(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

/// Deterministic start vector with generic components along every eigenvector
/// we are likely to meet (a constant vector is orthogonal to half the modes of
/// symmetric Toeplitz matrices).
fn start_vector(n: usize) -> DenseVector {
    let mut v: DenseVector = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64) * 1.618_033_988_75 + 0.37).sin())
        .collect();
    let nv = norm2(&v);
    scale(&mut v, 1.0 / nv);
    v
}

/// Power iteration on `apply`; returns the last Rayleigh quotient, iterations
/// used and whether successive quotients settled to relative `tol`.
fn power_iteration(
    apply: &dyn Fn(&[f64]) -> DenseVector,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> (f64, usize, bool) {
    let mut v = start_vector(n);
    let mut rq_prev = f64::NAN;
    let mut rq = 0.0;
    for it in 1..=max_iter {
        let w = apply(&v);
        rq = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 || !nw.is_finite() {
            return (rq, it, false);
        }
        if (rq - rq_prev).abs() <= tol * rq.abs() {
            return (rq, it, true);
        }
        rq_prev = rq;
        v = w;
        scale(&mut v, 1.0 / nw);
    }
    (rq, max_iter, false)
}

/// Estimates `λ_min` and `λ_max` of an SPD matrix given its action and the
/// action of its inverse. Never fails: on hitting `max_iter` the best
/// estimates are returned with `converged = false`.
pub fn extreme_eigs_spd(
    apply: &dyn Fn(&[f64]) -> DenseVector,
    apply_inverse: &dyn Fn(&[f64]) -> DenseVector,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> SpectralEstimate {
    assert!(tol > 0.0, "tolerance must be positive");
    let (lmax, it_max, ok_max) = power_iteration(apply, n, tol, max_iter);
    let (inv_max, it_min, ok_min) = power_iteration(apply_inverse, n, tol, max_iter);
    let mut lambda_min = 1.0 / inv_max;
    let mut lambda_max = lmax;
    if lambda_min > lambda_max {
        std::mem::swap(&mut lambda_min, &mut lambda_max);
    }
    SpectralEstimate {
        lambda_min,
        lambda_max,
        iterations_used: it_max + it_min,
        converged: ok_max && ok_min,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_estimate(d: &[f64], tol: f64) -> SpectralEstimate {
        let apply = |v: &[f64]| v.iter().zip(d).map(|(a, b)| a * b).collect();
        let inv = |v: &[f64]| v.iter().zip(d).map(|(a, b)| a / b).collect();
        extreme_eigs_spd(&apply, &inv, d.len(), tol, 10_000)
    }

    #[test]
    fn diagonal_examples() {
        let e = diag_estimate(&[1.0, 2.0, 3.0], 1e-12);
        assert!(e.converged);
        assert!((e.lambda_min - 1.0).abs() < 1e-9);
        assert!((e.lambda_max - 3.0).abs() < 1e-9);

        let e = diag_estimate(&[1.0; 4], 1e-12);
        assert_eq!((e.lambda_min, e.lambda_max), (1.0, 1.0));

        let e = diag_estimate(&[1e-6, 1.0], 1e-12);
        assert!((e.lambda_min / 1e-6 - 1.0).abs() < 1e-6);
        assert!((e.lambda_max - 1.0).abs() < 1e-6);
    }

    #[test]
    fn reproduces_diagonal_extremes() {
        let d: Vec<f64> = (0..40).map(|i| 10f64.powf(-(i as f64) / 8.0)).collect();
        let e = diag_estimate(&d, 1e-10);
        assert!(e.converged);
        assert!((e.lambda_max - 1.0).abs() < 1e-6);
        assert!((e.lambda_min / d[39] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn hitting_max_iter_is_not_an_error() {
        let d = [1.0, 0.999, 0.998];
        let apply = |v: &[f64]| v.iter().zip(&d).map(|(a, b)| a * b).collect();
        let inv = |v: &[f64]| v.iter().zip(&d).map(|(a, b)| a / b).collect();
        let e = extreme_eigs_spd(&apply, &inv, 3, 1e-15, 3);
        assert!(!e.converged);
        assert!(e.lambda_min <= e.lambda_max);
    }
}
