//! Gradient-boosted regression trees with squared loss.
//!
//! `F0 = mean(y)`; stage m fits a tree to the residuals `y - F(m-1)` and
//! adds `learning_rate` times its prediction.

use serde::{Deserialize, Serialize};

use super::{tree_fit, TreeModel, TreeParams};
use crate::models::{check_training, ModelError};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GbtParams {
    pub n_estimators: usize,
    /// In `[0, 1]`; zero keeps the constant `mean(y)` model.
    pub learning_rate: f64,
    pub tree: TreeParams,
    /// Reserved; boosting without subsampling is deterministic.
    pub seed: u64,
}

impl Default for GbtParams {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            learning_rate: 0.1,
            tree: TreeParams {
                max_depth: Some(3),
                ..TreeParams::default()
            },
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GbtModel {
    init: f64,
    learning_rate: f64,
    trees: Vec<TreeModel>,
    feature_count: usize,
    /// Training MSE of `F0, F1, …, FM`.
    pub stage_mse: Vec<f64>,
}

impl GbtModel {
    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn trees(&self) -> &[TreeModel] {
        &self.trees
    }

    pub fn init(&self) -> f64 {
        self.init
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.init
            + self.learning_rate * self.trees.iter().map(|t| t.predict_row(x)).sum::<f64>()
    }
}

pub fn gbt_fit(x: &Matrix, y: &[f64], params: &GbtParams) -> Result<GbtModel, ModelError> {
    check_training(x, y)?;
    params.tree.validate()?;
    if params.n_estimators == 0 {
        return Err(ModelError::InvalidParams("n_estimators must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&params.learning_rate) {
        return Err(ModelError::InvalidParams(format!(
            "learning_rate must be in [0, 1], got {}",
            params.learning_rate
        )));
    }
    let n = y.len();
    let init = y.iter().sum::<f64>() / n as f64;
    let mut f = vec![init; n];
    let mse = |f: &[f64]| f.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n as f64;
    let mut stage_mse = vec![mse(&f)];
    let mut trees = Vec::with_capacity(params.n_estimators);
    let mut residual = vec![0.0; n];
    for _ in 0..params.n_estimators {
        for i in 0..n {
            residual[i] = y[i] - f[i];
        }
        let tree = tree_fit(x, &residual, &params.tree)?;
        for (i, fi) in f.iter_mut().enumerate() {
            *fi += params.learning_rate * tree.predict_row(x.row(i));
        }
        stage_mse.push(mse(&f));
        trees.push(tree);
    }
    Ok(GbtModel {
        init,
        learning_rate: params.learning_rate,
        trees,
        feature_count: x.ncols(),
        stage_mse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> (Matrix, Vec<f64>) {
        let rows: Vec<[f64; 2]> = (0..40).map(|i| [i as f64, ((i * 7) % 9) as f64]).collect();
        let y = rows.iter().map(|r| (r[0] / 5.0).sin() * 3.0 + r[1]).collect();
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn zero_learning_rate_predicts_mean() {
        let (x, y) = data();
        let m = gbt_fit(&x, &y, &GbtParams { learning_rate: 0.0, n_estimators: 5, ..Default::default() }).unwrap();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        assert!(x.rows_iter().all(|r| m.predict_row(r) == mean));
    }

    #[test]
    fn single_full_stage_equals_tree() {
        let (x, y) = data();
        let p = GbtParams { n_estimators: 1, learning_rate: 1.0, tree: TreeParams::default(), seed: 0 };
        let m = gbt_fit(&x, &y, &p).unwrap();
        let t = tree_fit(&x, &y, &TreeParams::default()).unwrap();
        for r in x.rows_iter() {
            assert!((m.predict_row(r) - t.predict_row(r)).abs() < 1e-10);
        }
    }

    #[test]
    fn stage_mse_non_increasing() {
        let (x, y) = data();
        let m = gbt_fit(&x, &y, &GbtParams { n_estimators: 30, ..Default::default() }).unwrap();
        assert_eq!(m.stage_mse.len(), 31);
        for w in m.stage_mse.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_bad_learning_rate() {
        let (x, y) = data();
        assert!(gbt_fit(&x, &y, &GbtParams { learning_rate: 1.5, ..Default::default() }).is_err());
        assert!(gbt_fit(&x, &y, &GbtParams { n_estimators: 0, ..Default::default() }).is_err());
    }
}
