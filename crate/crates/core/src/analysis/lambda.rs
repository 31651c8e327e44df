//! Choosing the shift `λ` and the conditioning quantities behind the choice.

use crate::linalg::SpectralEstimate;

/// `λ* = √(λ₁ λ_N)`, which balances `κ(A + λI)` against the conditioning of
/// evaluating `f`; it gives `κ(A + λ*I) = √κ(A)`.
pub fn lambda_star(est: &SpectralEstimate) -> f64 {
    assert!(
        est.lambda_min > 0.0,
        "λ* needs a positive smallest eigenvalue"
    );
    (est.lambda_min * est.lambda_max).sqrt()
}

/// Heuristic shift when only a condition estimate is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaHeuristic {
    /// `κ^{-1/2}`.
    pub point: f64,
    /// `(10 κ^{-1/2}, κ^{-1/4})`: larger shifts trading accuracy for stability.
    pub stable_range: (f64, f64),
    /// `true` when the range is empty or inverted, i.e. the system is too
    /// well conditioned to need regularization.
    pub well_conditioned: bool,
}

pub fn lambda_heuristic(kappa_est: f64) -> LambdaHeuristic {
    assert!(kappa_est >= 1.0, "condition number estimate must be >= 1");
    let point = kappa_est.powf(-0.5);
    let lo = 10.0 * point;
    let hi = kappa_est.powf(-0.25);
    LambdaHeuristic {
        point,
        stable_range: (lo.min(hi), lo.max(hi)),
        well_conditioned: lo >= hi,
    }
}

/// Predicted asymptotic error reduction per step at `λ*`:
/// `(κ^{1/4} − 1)/(κ^{1/4} + 1)`.
pub fn convergence_factor(kappa: f64) -> f64 {
    assert!(kappa >= 1.0, "condition number must be >= 1");
    let q = kappa.powf(0.25);
    (q - 1.0) / (q + 1.0)
}

/// SPD value `(λ + λ₁)/λ₁` of the relative condition bound for evaluating `f(Z)`.
pub fn cond_bound_spd(lambda1: f64, lambda: f64) -> f64 {
    assert!(lambda1 > 0.0, "λ₁ must be positive");
    (lambda + lambda1) / lambda1
}

/// `κ(A + λI) = (λ_N + λ)/(λ₁ + λ)` for SPD `A`.
pub fn shifted_condition_spd(lambda1: f64, lambda_n: f64, lambda: f64) -> f64 {
    (lambda_n + lambda) / (lambda1 + lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est(lo: f64, hi: f64) -> SpectralEstimate {
        SpectralEstimate {
            lambda_min: lo,
            lambda_max: hi,
            iterations_used: 0,
            converged: true,
        }
    }

    #[test]
    fn lambda_star_examples() {
        assert!((lambda_star(&est(1e-6, 1.0)) - 1e-3).abs() < 1e-18);
        assert_eq!(lambda_star(&est(2.5, 2.5)), 2.5);
        for (l1, ln) in [(1e-8, 1.0), (1e-3, 40.0), (2.0, 3.0)] {
            let ls = lambda_star(&est(l1, ln));
            let k = shifted_condition_spd(l1, ln, ls);
            assert!((k / (ln / l1).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn heuristic_examples() {
        let h = lambda_heuristic(1e16);
        assert!((h.point - 1e-8).abs() < 1e-22);
        assert!((h.stable_range.0 - 1e-7).abs() < 1e-20);
        assert!((h.stable_range.1 - 1e-4).abs() < 1e-18);
        assert!(!h.well_conditioned);

        let h = lambda_heuristic(1.0);
        assert_eq!(h.point, 1.0);
        assert_eq!(h.stable_range, (1.0, 10.0));
        assert!(h.well_conditioned);

        assert!((lambda_heuristic(1e12).point - 1e-6).abs() < 1e-20);
    }

    #[test]
    fn convergence_factor_examples() {
        assert_eq!(convergence_factor(1.0), 0.0);
        assert!((convergence_factor(1e4) - 9.0 / 11.0).abs() < 1e-14);
        assert!((convergence_factor(1e8) - 99.0 / 101.0).abs() < 1e-14);
    }

    #[test]
    fn cond_bound_examples() {
        assert_eq!(cond_bound_spd(0.3, 0.0), 1.0);
        assert_eq!(cond_bound_spd(0.3, 0.3), 2.0);
        let (l1, ln) = (1e-8, 1.0);
        let ls = lambda_star(&est(l1, ln));
        let bound = cond_bound_spd(l1, ls);
        assert!((bound / 1e4 - 1.0).abs() < 1e-3);
        let kshift = shifted_condition_spd(l1, ln, ls);
        assert!((bound / kshift - 1.0).abs() < 1e-3);
    }
}
