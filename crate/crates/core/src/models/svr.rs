//! ε-support vector regression trained by SMO on the dual problem.
//!
//! The dual is written over `β = [α; α*]` (length 2n) with labels
//! `z = [+1…; -1…]` and linear term `p = [ε - y; ε + y]`:
//!
//! `min ½ βᵀQβ + pᵀβ`, `Q_ts = z_t z_s K(x_t, x_s)`, `zᵀβ = 0`, `0 ≤ β ≤ C`.
//!
//! Each iteration picks a maximal-violating pair with second-order working
//! set selection and solves the two-variable subproblem analytically. The
//! solver stops when the gap `m(β) - M(β)` between the largest and smallest
//! feasible gradient directions drops below `tol`. Non-positive-definite
//! kernels (sigmoid) are handled by clamping the pair curvature to a small
//! positive constant. No shrinking is used and the full Gram matrix is
//! cached.

use serde::{Deserialize, Serialize};

use super::{check_training, ModelError};
use crate::Matrix;

const TAU: f64 = 1e-12;

/// Kernel function. A missing `gamma` resolves to `1 / p` at fit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    /// `exp(-γ ‖a - b‖²)`
    Rbf {
        #[serde(default)]
        gamma: Option<f64>,
    },
    /// `(γ aᵀb + coef0)^degree`
    Polynomial {
        #[serde(default = "default_degree")]
        degree: u32,
        #[serde(default)]
        gamma: Option<f64>,
        #[serde(default)]
        coef0: f64,
    },
    /// `tanh(γ aᵀb + coef0)`
    Sigmoid {
        #[serde(default)]
        gamma: Option<f64>,
        #[serde(default)]
        coef0: f64,
    },
}

fn default_degree() -> u32 {
    3
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Rbf { gamma: None }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Kernel {
    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Rbf { .. } => "rbf",
            Kernel::Polynomial { .. } => "polynomial",
            Kernel::Sigmoid { .. } => "sigmoid",
        }
    }

    /// Parses a bare kernel name with default parameters.
    pub fn from_name(name: &str) -> Option<Kernel> {
        match name {
            "rbf" => Some(Kernel::Rbf { gamma: None }),
            "polynomial" | "poly" => Some(Kernel::Polynomial {
                degree: default_degree(),
                gamma: None,
                coef0: 0.0,
            }),
            "sigmoid" => Some(Kernel::Sigmoid {
                gamma: None,
                coef0: 0.0,
            }),
            _ => None,
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Kernel::Rbf { gamma } | Kernel::Polynomial { gamma, .. } | Kernel::Sigmoid { gamma, .. } => {
                gamma
            }
        }
    }

    /// Copy with `gamma` filled in as `1 / p` when unset.
    pub fn resolved(&self, p: usize) -> Kernel {
        let g = self.gamma().unwrap_or(1.0 / p.max(1) as f64);
        match *self {
            Kernel::Rbf { .. } => Kernel::Rbf { gamma: Some(g) },
            Kernel::Polynomial { degree, coef0, .. } => Kernel::Polynomial {
                degree,
                gamma: Some(g),
                coef0,
            },
            Kernel::Sigmoid { coef0, .. } => Kernel::Sigmoid {
                gamma: Some(g),
                coef0,
            },
        }
    }

    /// Evaluates the kernel; an unset `gamma` is treated as `1 / len`.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let g = self.gamma().unwrap_or(1.0 / a.len().max(1) as f64);
        match *self {
            Kernel::Rbf { .. } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-g * d2).exp()
            }
            Kernel::Polynomial { degree, coef0, .. } => (g * dot(a, b) + coef0).powi(degree as i32),
            Kernel::Sigmoid { coef0, .. } => (g * dot(a, b) + coef0).tanh(),
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        if let Some(g) = self.gamma() {
            if !(g > 0.0 && g.is_finite()) {
                return Err(ModelError::InvalidParams(format!("kernel gamma must be > 0, got {g}")));
            }
        }
        match *self {
            Kernel::Polynomial { degree: 0, .. } => {
                Err(ModelError::InvalidParams("polynomial degree must be >= 1".into()))
            }
            Kernel::Polynomial { coef0, .. } | Kernel::Sigmoid { coef0, .. } if !coef0.is_finite() => {
                Err(ModelError::InvalidParams("coef0 must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvrParams {
    pub kernel: Kernel,
    pub c: f64,
    pub epsilon: f64,
    pub tol: f64,
    /// Iteration budget in units of `2n` pair updates.
    pub max_passes: usize,
}

impl Default for SvrParams {
    fn default() -> Self {
        Self {
            kernel: Kernel::default(),
            c: 1.0,
            epsilon: 0.1,
            tol: 1e-3,
            max_passes: 1000,
        }
    }
}

/// Trained SVR: `f(x) = Σ coef_i K(sv_i, x) + bias`.
#[derive(Debug, Clone)]
pub struct SvrModel {
    kernel: Kernel,
    support_vectors: Matrix,
    coefficients: Vec<f64>,
    bias: f64,
    feature_count: usize,
}

impl SvrModel {
    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn support_vector_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.bias
            + self
                .support_vectors
                .rows_iter()
                .zip(&self.coefficients)
                .map(|(sv, c)| c * self.kernel.eval(sv, x))
                .sum::<f64>()
    }
}

/// Full solver output, including the per-sample dual variables.
#[derive(Debug, Clone)]
pub struct SvrFit {
    pub model: SvrModel,
    pub alpha: Vec<f64>,
    pub alpha_star: Vec<f64>,
    pub iterations: usize,
    /// Final `m(β) - M(β)` gap.
    pub violation: f64,
}

pub fn svr_fit(x: &Matrix, y: &[f64], params: &SvrParams) -> Result<SvrModel, ModelError> {
    svr_fit_detailed(x, y, params).map(|f| f.model)
}

pub fn svr_fit_detailed(x: &Matrix, y: &[f64], params: &SvrParams) -> Result<SvrFit, ModelError> {
    check_training(x, y)?;
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(ModelError::InvalidParams(format!("C must be > 0, got {}", params.c)));
    }
    if !(params.epsilon >= 0.0 && params.epsilon.is_finite()) {
        return Err(ModelError::InvalidParams(format!(
            "epsilon must be >= 0, got {}",
            params.epsilon
        )));
    }
    if params.tol.is_nan() || params.tol <= 0.0 || params.max_passes == 0 {
        return Err(ModelError::InvalidParams("tol must be > 0 and max_passes >= 1".into()));
    }
    params.kernel.validate()?;
    let kernel = params.kernel.resolved(x.ncols());
    let n = y.len();
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = kernel.eval(x.row(i), x.row(j));
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }
    }
    let max_iter = params.max_passes.saturating_mul(2 * n);
    let sol = smo(&gram, y, params.c, params.epsilon, params.tol, max_iter)?;

    let alpha = sol.beta[..n].to_vec();
    let alpha_star = sol.beta[n..].to_vec();
    let mut sv_rows = Vec::new();
    let mut coefficients = Vec::new();
    for i in 0..n {
        let d = alpha[i] - alpha_star[i];
        if d != 0.0 {
            sv_rows.push(i);
            coefficients.push(d);
        }
    }
    let model = SvrModel {
        kernel,
        support_vectors: x.select_rows(&sv_rows),
        coefficients,
        bias: -sol.rho,
        feature_count: x.ncols(),
    };
    Ok(SvrFit {
        model,
        alpha,
        alpha_star,
        iterations: sol.iterations,
        violation: sol.violation,
    })
}

struct Solution {
    beta: Vec<f64>,
    rho: f64,
    iterations: usize,
    violation: f64,
}

fn smo(gram: &[f64], y: &[f64], c: f64, eps: f64, tol: f64, max_iter: usize) -> Result<Solution, ModelError> {
    let n = y.len();
    let l = 2 * n;
    let z = |t: usize| if t < n { 1.0 } else { -1.0 };
    let src = |t: usize| if t < n { t } else { t - n };
    let k = |a: usize, b: usize| gram[a * n + b];
    let mut beta = vec![0.0; l];
    let mut g: Vec<f64> = (0..l)
        .map(|t| if t < n { eps - y[t] } else { eps + y[t - n] })
        .collect();
    let at_upper = |b: f64| b >= c;
    let at_lower = |b: f64| b <= 0.0;

    let mut iterations = 0;
    let violation;
    loop {
        // First index: maximal violation of -z_t G_t over the "up" set.
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..l {
            if z(t) > 0.0 {
                if !at_upper(beta[t]) && -g[t] >= gmax {
                    gmax = -g[t];
                    i_sel = t;
                }
            } else if !at_lower(beta[t]) && g[t] >= gmax {
                gmax = g[t];
                i_sel = t;
            }
        }
        // Second index: largest objective decrease under the pair model.
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = usize::MAX;
        let mut best = f64::INFINITY;
        if i_sel != usize::MAX {
            let si = src(i_sel);
            let kii = k(si, si);
            for t in 0..l {
                let st = src(t);
                let (open, grad_diff, cand) = if z(t) > 0.0 {
                    (!at_lower(beta[t]), gmax + g[t], g[t])
                } else {
                    (!at_upper(beta[t]), gmax - g[t], -g[t])
                };
                if !open {
                    continue;
                }
                if cand >= gmax2 {
                    gmax2 = cand;
                }
                if grad_diff > 0.0 {
                    let quad = kii + k(st, st) - 2.0 * k(si, st);
                    let obj = -(grad_diff * grad_diff) / if quad > 0.0 { quad } else { TAU };
                    if obj <= best {
                        best = obj;
                        j_sel = t;
                    }
                }
            }
        }
        let gap = gmax + gmax2;
        if i_sel == usize::MAX || j_sel == usize::MAX || gap < tol {
            violation = if gap.is_finite() { gap.max(0.0) } else { 0.0 };
            break;
        }
        if iterations >= max_iter {
            return Err(ModelError::Convergence {
                iterations,
                violation: gap,
            });
        }
        iterations += 1;

        let (i, j) = (i_sel, j_sel);
        let (si, sj) = (src(i), src(j));
        let (zi, zj) = (z(i), z(j));
        let qij = zi * zj * k(si, sj);
        let (old_i, old_j) = (beta[i], beta[j]);
        if zi != zj {
            let mut quad = k(si, si) + k(sj, sj) + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-g[i] - g[j]) / quad;
            let diff = beta[i] - beta[j];
            beta[i] += delta;
            beta[j] += delta;
            if diff > 0.0 {
                if beta[j] < 0.0 {
                    beta[j] = 0.0;
                    beta[i] = diff;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = -diff;
            }
            if diff > 0.0 {
                if beta[i] > c {
                    beta[i] = c;
                    beta[j] = c - diff;
                }
            } else if beta[j] > c {
                beta[j] = c;
                beta[i] = c + diff;
            }
        } else {
            let mut quad = k(si, si) + k(sj, sj) - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (g[i] - g[j]) / quad;
            let sum = beta[i] + beta[j];
            beta[i] -= delta;
            beta[j] += delta;
            if sum > c {
                if beta[i] > c {
                    beta[i] = c;
                    beta[j] = sum - c;
                }
            } else if beta[j] < 0.0 {
                beta[j] = 0.0;
                beta[i] = sum;
            }
            if sum > c {
                if beta[j] > c {
                    beta[j] = c;
                    beta[i] = sum - c;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = sum;
            }
        }
        let di = (beta[i] - old_i) * zi;
        let dj = (beta[j] - old_j) * zj;
        let (ri, rj) = (&gram[si * n..(si + 1) * n], &gram[sj * n..(sj + 1) * n]);
        for m in 0..n {
            let a = ri[m] * di + rj[m] * dj;
            g[m] += a;
            g[m + n] -= a;
        }
    }

    // Bias from free variables, else the midpoint of the feasible interval.
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free_sum, mut free_n) = (0.0, 0usize);
    for t in 0..l {
        let yg = z(t) * g[t];
        if at_upper(beta[t]) {
            if z(t) < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if at_lower(beta[t]) {
            if z(t) > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_n += 1;
            free_sum += yg;
        }
    }
    let rho = if free_n > 0 {
        free_sum / free_n as f64
    } else {
        (ub + lb) / 2.0
    };
    Ok(Solution {
        beta,
        rho,
        iterations,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inside_tube_all_zero() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]);
        let y = [1.0, 1.05, 0.98, 1.02];
        let fit = svr_fit_detailed(&x, &y, &SvrParams { epsilon: 0.2, ..Default::default() }).unwrap();
        assert!(fit.alpha.iter().chain(&fit.alpha_star).all(|&a| a == 0.0));
        assert_eq!(fit.model.support_vector_count(), 0);
        assert!((fit.model.bias() - (1.05 + 0.98) / 2.0).abs() < 1e-12);
        assert_eq!(fit.model.predict_row(&[10.0]), fit.model.bias());
    }

    #[test]
    fn fits_simple_curve() {
        let rows: Vec<[f64; 1]> = (0..30).map(|i| [i as f64 / 10.0 - 1.5]).collect();
        let y: Vec<f64> = rows.iter().map(|r| r[0].sin()).collect();
        let params = SvrParams { c: 10.0, epsilon: 0.01, kernel: Kernel::Rbf { gamma: Some(1.0) }, ..Default::default() };
        let m = svr_fit(&Matrix::from_rows(&rows), &y, &params).unwrap();
        for (r, t) in rows.iter().zip(&y) {
            assert!((m.predict_row(r) - t).abs() < 0.05);
        }
    }

    #[test]
    fn iteration_cap_reports_violation() {
        let rows: Vec<[f64; 1]> = (0..20).map(|i| [i as f64]).collect();
        let y: Vec<f64> = (0..20).map(|i| (i * i % 7) as f64).collect();
        let params = SvrParams { max_passes: 1, tol: 1e-12, c: 100.0, ..Default::default() };
        match svr_fit(&Matrix::from_rows(&rows), &y, &params) {
            Err(ModelError::Convergence { violation, .. }) => assert!(violation > 1e-12),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_params() {
        let x = Matrix::from_rows(&[[0.0], [1.0]]);
        let y = [0.0, 1.0];
        for p in [
            SvrParams { c: 0.0, ..Default::default() },
            SvrParams { epsilon: -1.0, ..Default::default() },
            SvrParams { kernel: Kernel::Rbf { gamma: Some(-1.0) }, ..Default::default() },
            SvrParams { kernel: Kernel::Polynomial { degree: 0, gamma: None, coef0: 0.0 }, ..Default::default() },
        ] {
            assert!(matches!(svr_fit(&x, &y, &p), Err(ModelError::InvalidParams(_))));
        }
    }

    #[test]
    fn kernel_names_roundtrip() {
        for name in ["rbf", "polynomial", "sigmoid"] {
            assert_eq!(Kernel::from_name(name).unwrap().name(), name);
        }
        assert_eq!(Kernel::Rbf { gamma: None }.resolved(4).gamma(), Some(0.25));
    }
}
