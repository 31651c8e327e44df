use std::collections::BTreeMap;

use super::TestProblem;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Franke's bivariate test function on the unit square.
pub fn franke(x: f64, y: f64) -> f64 {
    let (x9, y9) = (9.0 * x, 9.0 * y);
    0.75 * (-((x9 - 2.0).powi(2) + (y9 - 2.0).powi(2)) / 4.0).exp()
        + 0.75 * (-(x9 + 1.0).powi(2) / 49.0 - (y9 + 1.0) / 10.0).exp()
        + 0.5 * (-((x9 - 7.0).powi(2) + (y9 - 3.0).powi(2)) / 4.0).exp()
        - 0.2 * (-(x9 - 4.0).powi(2) - (y9 - 7.0).powi(2)).exp()
}

/// Gaussian RBF interpolation of Franke's function on a `grid_n × grid_n`
/// equispaced grid of the unit square: `A_ij = exp(−shape²‖p_i − p_j‖²)`,
/// `b_i = franke(p_i)`. The exact coefficient vector is unknown.
pub fn generate_franke_rbf(grid_n: usize, shape: f64) -> Result<TestProblem> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "RBF grid needs at least 2 points per side, got {grid_n}"
        )));
    }
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "RBF shape parameter must be positive, got {shape}"
        )));
    }
    let step = 1.0 / (grid_n - 1) as f64;
    let points: Vec<(f64, f64)> = (0..grid_n)
        .flat_map(|iy| (0..grid_n).map(move |ix| (ix as f64 * step, iy as f64 * step)))
        .collect();
    let n = points.len();
    let eps2 = shape * shape;
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
        (-eps2 * (dx * dx + dy * dy)).exp()
    });
    let b = points.iter().map(|&(x, y)| franke(x, y)).collect();
    let mut params = BTreeMap::new();
    params.insert("grid_n".to_string(), grid_n.to_string());
    params.insert("shape".to_string(), shape.to_string());
    Ok(TestProblem {
        name: "franke".to_string(),
        a,
        b,
        x_true: None,
        params,
    })
}
