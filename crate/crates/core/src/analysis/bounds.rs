//! A-priori convergence theory for the symmetric positive definite case.
//!
//! For SPD `A` with spectrum in `[λ₁, λ_N]` the field of values of
//! `Z = (A + λI)^{-1}` is the interval `[1/(λ_N+λ), 1/(λ₁+λ)]`. Its exterior
//! conformal map is `ψ(w) = γw + c₀ + c₁/w`, and `r̂ > 1` with `ψ(r̂) = 1/λ`
//! measures how far the pole of `f(z) = z/(1 − λz)` sits from the interval.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Field-of-values constant for nonsymmetric `A` (Crouzeix's bound). Only
/// the symmetric value [`SYMMETRIC_CONSTANT`] is exercised here.
pub const CROUZEIX_CONSTANT: f64 = 11.08;

/// Field-of-values constant when `A` is symmetric.
pub const SYMMETRIC_CONSTANT: f64 = 1.0;

/// Conformal map data for the interval `I_λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMap {
    pub lambda1: f64,
    pub lambda_n: f64,
    pub lambda: f64,
    /// Capacity of the interval.
    pub gamma: f64,
    pub c0: f64,
    pub c1: f64,
}

impl IntervalMap {
    /// `ψ(w) = γw + c₀ + c₁/w`.
    pub fn psi(&self, w: f64) -> f64 {
        self.gamma * w + self.c0 + self.c1 / w
    }

    /// `ψ′(w) = γ − c₁/w²`.
    pub fn psi_prime(&self, w: f64) -> f64 {
        self.gamma - self.c1 / (w * w)
    }
}

pub fn interval_map(lambda1: f64, lambda_n: f64, lambda: f64) -> Result<IntervalMap> {
    if !(lambda1 > 0.0 && lambda_n >= lambda1 && lambda > 0.0) || !lambda_n.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "interval map needs 0 < λ₁ ≤ λ_N and λ > 0 (got {lambda1:e}, {lambda_n:e}, {lambda:e})"
        )));
    }
    let left = 1.0 / (lambda1 + lambda);
    let right = 1.0 / (lambda_n + lambda);
    let gamma = 0.25 * (left - right);
    Ok(IntervalMap {
        lambda1,
        lambda_n,
        lambda,
        gamma,
        c0: 0.5 * (left + right),
        c1: gamma,
    })
}

/// `r̂ = u + √(u² − 1)` with
/// `u = 2λ₁λ_N / (λ(λ_N − λ₁)) + (λ_N + λ₁)/(λ_N − λ₁)`.
pub fn rhat(map: &IntervalMap) -> Result<f64> {
    let width = map.lambda_n - map.lambda1;
    if !(width > 0.0) {
        return Err(Error::InvalidArgument(
            "r̂ is undefined for a degenerate interval (λ₁ = λ_N)".into(),
        ));
    }
    let u = 2.0 * map.lambda1 * map.lambda_n / (map.lambda * width)
        + (map.lambda_n + map.lambda1) / width;
    // u + √(u²−1) without overflow in u²
    Ok(u + ((u - 1.0) * (u + 1.0)).sqrt())
}

/// The two-regime a-priori bound on `‖p_{m−1} − f‖` over the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBound {
    pub rhat: f64,
    /// Smallest positive integer with `r̂/(m̄+1) < r̂ − 1`.
    pub mbar: usize,
    lambda: f64,
    psi_prime: f64,
}

impl AprioriBound {
    /// Bound for polynomial degree `m − 1`.
    pub fn bound_at(&self, m: usize) -> f64 {
        let r = self.rhat;
        let lam2 = self.lambda * self.lambda;
        let mf = m as f64;
        if m >= self.mbar {
            let mb = self.mbar as f64;
            let front = 2.0 * E * mb * r / (mb * (r - 1.0) - 1.0);
            front / (lam2 * self.psi_prime) * (mf + 1.0) * (-mf * r.ln()).exp()
        } else {
            4.0 / (lam2 * (r - 1.0) * self.psi_prime)
                * (mf * (2.0 / (r + 1.0)).ln()).exp()
                * (r + 1.0)
                / (r - 1.0)
        }
    }

    /// Error bound of the symmetric case: `‖E_m‖/‖b‖ ≤ 2C · bound_at(m)`.
    pub fn error_bound(&self, m: usize, constant: f64) -> f64 {
        2.0 * constant * self.bound_at(m)
    }
}

pub fn apriori_bound(map: &IntervalMap) -> Result<AprioriBound> {
    if !(map.psi(1.0) < 1.0 / map.lambda) {
        return Err(Error::Domain(
            "ψ(1) ≥ 1/λ: the interval touches the pole of f".into(),
        ));
    }
    let r = rhat(map)?;
    if !(r > 1.0) {
        return Err(Error::Domain(format!("r̂ = {r} is not greater than one")));
    }
    let mut mbar = 1usize;
    while !(r / (mbar as f64 + 1.0) < r - 1.0) {
        mbar += 1;
    }
    Ok(AprioriBound {
        rhat: r,
        mbar,
        lambda: map.lambda,
        psi_prime: map.psi_prime(r),
    })
}

/// `m̄` for a given `r̂`, exposed for checking.
pub fn mbar_for(rhat: f64) -> usize {
    let mut m = 1usize;
    while !(rhat / (m as f64 + 1.0) < rhat - 1.0) {
        m += 1;
    }
    m
}
