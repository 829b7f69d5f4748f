use crate::folds::{complement, kfold_indices};
use crate::metrics::{negative_mae, r_squared};
use crate::models::{ModelError, ModelSpec};
use crate::Matrix;

/// Per-fold scores of one k-fold run.
#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub k: usize,
    pub neg_mae: Vec<f64>,
    /// `None` where the fold's R² is undefined (constant predictions).
    pub r2: Vec<Option<f64>>,
    pub folds: Vec<Vec<usize>>,
}

impl CvResult {
    pub fn mean_neg_mae(&self) -> f64 {
        self.neg_mae.iter().sum::<f64>() / self.k as f64
    }

    /// Population standard deviation of the fold negative-MAE scores.
    pub fn std_neg_mae(&self) -> f64 {
        let m = self.mean_neg_mae();
        (self.neg_mae.iter().map(|v| (v - m).powi(2)).sum::<f64>() / self.k as f64).sqrt()
    }

    /// Mean R² over folds where it is defined.
    pub fn mean_r2(&self) -> Option<f64> {
        let defined: Vec<f64> = self.r2.iter().flatten().copied().collect();
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
    }
}

/// Fits on k-1 folds and scores the held-out fold, for every fold.
pub fn k_fold_cv(
    spec: &ModelSpec,
    x: &Matrix,
    y: &[f64],
    k: usize,
    seed: u64,
) -> Result<CvResult, ModelError> {
    let folds = kfold_indices(y.len(), k, seed)?;
    cv_with_folds(spec, x, y, folds)
}

pub(crate) fn cv_with_folds(
    spec: &ModelSpec,
    x: &Matrix,
    y: &[f64],
    folds: Vec<Vec<usize>>,
) -> Result<CvResult, ModelError> {
    let n = y.len();
    let mut neg_mae = Vec::with_capacity(folds.len());
    let mut r2 = Vec::with_capacity(folds.len());
    for held in &folds {
        let train = complement(n, held);
        let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let model = spec.fit(&x.select_rows(&train), &yt)?;
        let pred = model.predict(&x.select_rows(held))?;
        let actual: Vec<f64> = held.iter().map(|&i| y[i]).collect();
        neg_mae.push(negative_mae(&pred, &actual)?);
        r2.push(r_squared(&pred, &actual).ok());
    }
    Ok(CvResult {
        k: folds.len(),
        neg_mae,
        r2,
        folds,
    })
}
