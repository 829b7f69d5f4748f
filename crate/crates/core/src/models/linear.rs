//! Ordinary least squares and ridge regression.
//!
//! Both center X and y so the intercept is never penalized, then solve via
//! the thin SVD `Xc = U S Vᵀ`: `β = V diag(s / (s² + α)) Uᵀ yc`. With
//! `α = 0`, singular values below `max(n, p) · ε · s_max` are dropped, which
//! yields the minimum-norm least-squares solution for rank-deficient X.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_training, ModelError};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RidgeParams {
    pub alpha: f64,
    /// Kept for configuration parity; the closed-form solver ignores it.
    pub max_iterations: Option<usize>,
    /// Scale centered columns to unit variance before solving.
    pub normalize: bool,
}

impl Default for RidgeParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            max_iterations: None,
            normalize: false,
        }
    }
}

/// `y ≈ intercept + coefficients · x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .coefficients
                .iter()
                .zip(x)
                .map(|(b, v)| b * v)
                .sum::<f64>()
    }
}

pub fn ols_fit(x: &Matrix, y: &[f64]) -> Result<LinearModel, ModelError> {
    solve(x, y, 0.0, false)
}

pub fn ridge_fit(x: &Matrix, y: &[f64], params: &RidgeParams) -> Result<LinearModel, ModelError> {
    if !(params.alpha >= 0.0 && params.alpha.is_finite()) {
        return Err(ModelError::InvalidParams(format!(
            "ridge alpha must be finite and >= 0, got {}",
            params.alpha
        )));
    }
    solve(x, y, params.alpha, params.normalize)
}

fn solve(x: &Matrix, y: &[f64], alpha: f64, normalize: bool) -> Result<LinearModel, ModelError> {
    check_training(x, y)?;
    let (n, p) = (x.nrows(), x.ncols());
    let y_mean = y.iter().sum::<f64>() / n as f64;
    if p == 0 {
        return Ok(LinearModel {
            coefficients: vec![],
            intercept: y_mean,
        });
    }
    let means: Vec<f64> = (0..p)
        .map(|j| x.rows_iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let mut scales = vec![1.0; p];
    if normalize {
        for (j, s) in scales.iter_mut().enumerate() {
            let var = x.rows_iter().map(|r| (r[j] - means[j]).powi(2)).sum::<f64>() / n as f64;
            if var > 0.0 {
                *s = var.sqrt();
            }
        }
    }
    let xc = DMatrix::from_fn(n, p, |i, j| (x.get(i, j) - means[j]) / scales[j]);
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));

    let svd = xc.svd(true, true);
    let u = svd.u.as_ref().expect("U requested");
    let v_t = svd.v_t.as_ref().expect("V^T requested");
    let s = &svd.singular_values;
    let s_max = s.iter().cloned().fold(0.0, f64::max);
    let cutoff = n.max(p) as f64 * f64::EPSILON * s_max;
    let uty = u.transpose() * &yc;
    let mut beta = vec![0.0; p];
    for k in 0..s.len() {
        let sk = s[k];
        let f = if alpha == 0.0 {
            if sk > cutoff {
                1.0 / sk
            } else {
                0.0
            }
        } else {
            sk / (sk * sk + alpha)
        };
        let w = f * uty[k];
        if w != 0.0 {
            for (j, b) in beta.iter_mut().enumerate() {
                *b += v_t[(k, j)] * w;
            }
        }
    }
    for (b, s) in beta.iter_mut().zip(&scales) {
        *b /= s;
    }
    let intercept = y_mean - beta.iter().zip(&means).map(|(b, m)| b * m).sum::<f64>();
    Ok(LinearModel {
        coefficients: beta,
        intercept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_fit() {
        let m = ols_fit(&Matrix::from_rows(&[[0.0], [1.0]]), &[1.0, 3.0]).unwrap();
        assert!((m.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((m.intercept - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_linear_recovery() {
        let rows: Vec<[f64; 2]> = (0..20).map(|i| [i as f64, ((i * 7) % 5) as f64]).collect();
        let y: Vec<f64> = rows.iter().map(|r| 0.5 - 2.0 * r[0] + 3.0 * r[1]).collect();
        let m = ols_fit(&Matrix::from_rows(&rows), &y).unwrap();
        assert!((m.coefficients[0] + 2.0).abs() < 1e-8);
        assert!((m.coefficients[1] - 3.0).abs() < 1e-8);
        assert!((m.intercept - 0.5).abs() < 1e-8);
    }

    #[test]
    fn ridge_large_alpha_shrinks_to_mean() {
        let x = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0], [2.0, 5.0], [3.0, 1.0]]);
        let y = [1.0, 2.0, 4.0, 9.0];
        let m = ridge_fit(&x, &y, &RidgeParams { alpha: 1e12, ..Default::default() }).unwrap();
        assert!(m.coefficients.iter().all(|b| b.abs() < 1e-9));
        assert!((m.intercept - 4.0).abs() < 1e-8);
    }

    #[test]
    fn ridge_duplicated_column_against_penalized_normal_equations() {
        // Oracle: (XcᵀXc + αI) β = Xcᵀ yc solved by Cramer's rule on 2x2.
        let base = [0.3, -1.2, 2.0, 0.7, 1.5, -0.4];
        let y = [1.0, -2.0, 3.5, 0.2, 2.9, -0.1];
        let rows: Vec<[f64; 2]> = base.iter().map(|&v| [v, v]).collect();
        let m = ridge_fit(&Matrix::from_rows(&rows), &y, &RidgeParams::default()).unwrap();
        let n = base.len() as f64;
        let xm = base.iter().sum::<f64>() / n;
        let ym = y.iter().sum::<f64>() / n;
        let sxx: f64 = base.iter().map(|v| (v - xm).powi(2)).sum();
        let sxy: f64 = base.iter().zip(&y).map(|(v, t)| (v - xm) * (t - ym)).sum();
        let (a, b) = (sxx + 1.0, sxx);
        let det = a * a - b * b;
        let beta0 = (a * sxy - b * sxy) / det;
        assert!(m.coefficients.iter().all(|c| c.is_finite()));
        assert!((m.coefficients[0] - m.coefficients[1]).abs() < 1e-12);
        assert!((m.coefficients[0] - beta0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_min_norm() {
        let rows: Vec<[f64; 2]> = (0..5).map(|i| [i as f64, i as f64]).collect();
        let y: Vec<f64> = (0..5).map(|i| 2.0 * i as f64).collect();
        let m = ols_fit(&Matrix::from_rows(&rows), &y).unwrap();
        assert!((m.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((m.coefficients[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wide_and_single_row() {
        let m = ols_fit(&Matrix::from_rows(&[[1.0, 2.0, 3.0]]), &[4.0]).unwrap();
        assert_eq!(m.intercept, 4.0);
        let x = Matrix::from_rows(&[[1.0, 2.0, 3.0], [0.0, 1.0, -1.0]]);
        let m = ols_fit(&x, &[1.0, 2.0]).unwrap();
        for (i, t) in [1.0, 2.0].iter().enumerate() {
            assert!((m.predict_row(x.row(i)) - t).abs() < 1e-10);
        }
    }

    #[test]
    fn normalize_matches_unscaled_ols_at_zero_alpha() {
        let rows: Vec<[f64; 2]> = (0..12).map(|i| [i as f64 * 100.0, ((i * 5) % 7) as f64]).collect();
        let y: Vec<f64> = rows.iter().enumerate().map(|(i, r)| 0.01 * r[0] - r[1] + (i % 3) as f64).collect();
        let x = Matrix::from_rows(&rows);
        let a = ols_fit(&x, &y).unwrap();
        let b = ridge_fit(&x, &y, &RidgeParams { alpha: 0.0, normalize: true, ..Default::default() }).unwrap();
        for (p, q) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((p - q).abs() < 1e-10);
        }
        assert!(ridge_fit(&x, &y, &RidgeParams { alpha: -1.0, ..Default::default() }).is_err());
    }
}
