use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::TestProblem;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// Classical first-kind Fredholm test equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FredholmKind {
    Gravity,
    Foxgood,
    Shaw,
    Baart,
}

impl FredholmKind {
    pub const ALL: [FredholmKind; 4] = [
        FredholmKind::Gravity,
        FredholmKind::Foxgood,
        FredholmKind::Shaw,
        FredholmKind::Baart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FredholmKind::Gravity => "gravity",
            FredholmKind::Foxgood => "foxgood",
            FredholmKind::Shaw => "shaw",
            FredholmKind::Baart => "baart",
        }
    }
}

impl fmt::Display for FredholmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FredholmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gravity" => Ok(FredholmKind::Gravity),
            "foxgood" => Ok(FredholmKind::Foxgood),
            "shaw" => Ok(FredholmKind::Shaw),
            "baart" => Ok(FredholmKind::Baart),
            _ => Err(Error::UnsupportedProblem(s.to_string())),
        }
    }
}

/// Discretizes the named equation on `n` points; the right-hand side is
/// always `b = A x_true`.
pub fn generate_fredholm(kind: FredholmKind, n: usize) -> Result<TestProblem> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!(
            "{kind} needs at least 8 unknowns, got {n}"
        )));
    }
    let (a, x) = match kind {
        FredholmKind::Gravity => gravity(n),
        FredholmKind::Foxgood => foxgood(n),
        FredholmKind::Shaw => {
            if n % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "shaw requires an even number of unknowns, got {n}"
                )));
            }
            shaw(n)
        }
        FredholmKind::Baart => baart(n),
    };
    let b = a.matvec(&x);
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), n.to_string());
    if kind == FredholmKind::Gravity {
        params.insert("depth".to_string(), "0.25".to_string());
    }
    Ok(TestProblem {
        name: kind.name().to_string(),
        a,
        b,
        x_true: Some(x),
        params,
    })
}

fn midpoints(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Vertical gravity surveying: `k(s,t) = d (d² + (s−t)²)^{-3/2}` on `[0,1]²`,
/// midpoint rule, `x(t) = sin(πt) + ½ sin(2πt)`.
fn gravity(n: usize) -> (DenseMatrix, DenseVector) {
    let d = 0.25;
    let h = 1.0 / n as f64;
    let t = midpoints(n, 0.0, 1.0);
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        let ds = t[i] - t[j];
        h * d / (d * d + ds * ds).powf(1.5)
    });
    let x = t
        .iter()
        .map(|&t| (PI * t).sin() + 0.5 * (2.0 * PI * t).sin())
        .collect();
    (a, x)
}

/// `k(s,t) = √(s² + t²)` on `[0,1]²`, midpoint rule, `x(t) = t`.
fn foxgood(n: usize) -> (DenseMatrix, DenseVector) {
    let h = 1.0 / n as f64;
    let t = midpoints(n, 0.0, 1.0);
    let a = DenseMatrix::from_fn(n, n, |i, j| h * (t[i] * t[i] + t[j] * t[j]).sqrt());
    (a, t)
}

/// One-dimensional image restoration:
/// `k(s,t) = (cos s + cos t)² (sin u / u)²`, `u = π(sin s + sin t)` on
/// `[−π/2, π/2]²`, midpoint rule.
fn shaw(n: usize) -> (DenseMatrix, DenseVector) {
    let h = PI / n as f64;
    let t = midpoints(n, -PI / 2.0, PI / 2.0);
    let co: Vec<f64> = t.iter().map(|t| t.cos()).collect();
    let psi: Vec<f64> = t.iter().map(|t| PI * t.sin()).collect();
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let u = psi[i] + psi[j];
            let sinc = if u.abs() < 1e-300 { 1.0 } else { u.sin() / u };
            let v = h * ((co[i] + co[j]) * sinc).powi(2);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let x = t
        .iter()
        .map(|&t| 2.0 * (-6.0 * (t - 0.8).powi(2)).exp() + (-2.0 * (t + 0.5).powi(2)).exp())
        .collect();
    (a, x)
}

/// `k(s,t) = exp(s cos t)` on `s ∈ [0, π/2]`, `t ∈ [0, π]`, Galerkin
/// discretization with normalized box functions (exact in `s`, Simpson in
/// `t`); `x(t) = sin t` projected onto the same basis.
fn baart(n: usize) -> (DenseMatrix, DenseVector) {
    let hs = PI / (2.0 * n as f64);
    let ht = PI / n as f64;
    let c = 1.0 / (3.0 * 2f64.sqrt());
    let s: Vec<f64> = (0..=n).map(|i| i as f64 * hs).collect();
    // ∫_{s_{i}}^{s_{i+1}} exp(σ cos τ) dσ for every row i
    let strip = |cos_t: f64| -> Vec<f64> {
        if cos_t == 0.0 {
            vec![hs; n]
        } else {
            (0..n)
                .map(|i| (s[i] * cos_t).exp() * ((s[i + 1] - s[i]) * cos_t).exp_m1() / cos_t)
                .collect()
        }
    };
    let mut a = DenseMatrix::zeros(n, n);
    let mut left = strip(1.0);
    for j in 0..n {
        let mid = strip(((j as f64 + 0.5) * ht).cos());
        // cos(t) is exactly zero at the midpoint of the interval
        let right_cos = if 2 * (j + 1) == n {
            0.0
        } else {
            ((j + 1) as f64 * ht).cos()
        };
        let right = strip(right_cos);
        for i in 0..n {
            a[(i, j)] = c * (left[i] + 4.0 * mid[i] + right[i]);
        }
        left = right;
    }
    let x = (0..n)
        .map(|j| ((j as f64 * ht).cos() - ((j + 1) as f64 * ht).cos()) / ht.sqrt())
        .collect();
    (a, x)
}
