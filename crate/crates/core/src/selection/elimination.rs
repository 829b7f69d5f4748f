//! Greedy backward elimination scored by k-fold CV negative MAE.
//!
//! Every candidate subset is scored on the same folds, so comparisons are
//! paired. Each round removes the feature whose removal gives the highest
//! mean score (lowest index on ties) and stops once no removal strictly
//! improves the current score or `min_features` remain.

use crate::data::{DataError, DataTable};
use crate::folds::kfold_indices;
use crate::models::{ModelError, ModelSpec};
use crate::Matrix;

use super::cv::cv_with_folds;

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationStep {
    pub removed: String,
    /// Mean CV negative MAE after the removal.
    pub score: f64,
    pub remaining: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationResult {
    /// Mean CV negative MAE with every candidate feature.
    pub initial_score: f64,
    pub steps: Vec<EliminationStep>,
    /// Surviving features in their original order.
    pub selected: Vec<String>,
    /// Column indices of `selected` in the input matrix.
    pub selected_indices: Vec<usize>,
}

impl EliminationResult {
    pub fn removal_order(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.removed.as_str()).collect()
    }
}

pub fn backward_eliminate_matrix(
    spec: &ModelSpec,
    x: &Matrix,
    y: &[f64],
    names: &[String],
    min_features: usize,
    folds: usize,
    seed: u64,
) -> Result<EliminationResult, ModelError> {
    if min_features == 0 {
        return Err(ModelError::InvalidParams("min_features must be >= 1".into()));
    }
    if names.len() != x.ncols() {
        return Err(ModelError::DimensionMismatch {
            expected: x.ncols(),
            got: names.len(),
        });
    }
    let fold_rows = kfold_indices(y.len(), folds, seed)?;
    let score = |cols: &[usize]| -> Result<f64, ModelError> {
        let r = cv_with_folds(spec, &x.select_columns(cols), y, fold_rows.clone())?;
        Ok(r.mean_neg_mae())
    };
    let mut current: Vec<usize> = (0..x.ncols()).collect();
    let initial_score = score(&current)?;
    let mut best_score = initial_score;
    let mut steps = Vec::new();
    while current.len() > min_features {
        let mut round_best: Option<(f64, usize)> = None;
        for pos in 0..current.len() {
            let mut cols = current.clone();
            cols.remove(pos);
            let s = score(&cols)?;
            if round_best.is_none_or(|(b, _)| s > b) {
                round_best = Some((s, pos));
            }
        }
        let (s, pos) = round_best.expect("at least one candidate");
        if s <= best_score {
            break;
        }
        let removed = current.remove(pos);
        best_score = s;
        steps.push(EliminationStep {
            removed: names[removed].clone(),
            score: s,
            remaining: current.len(),
        });
    }
    Ok(EliminationResult {
        initial_score,
        steps,
        selected: current.iter().map(|&j| names[j].clone()).collect(),
        selected_indices: current,
    })
}

/// Runs elimination over all non-target columns of `table` with 5 folds.
pub fn backward_eliminate(
    spec: &ModelSpec,
    table: &DataTable,
    target: &str,
    min_features: usize,
    seed: u64,
) -> Result<EliminationResult, crate::Error> {
    let y = table.column(target)?;
    let names: Vec<String> = table
        .schema()
        .feature_names()
        .into_iter()
        .map(String::from)
        .collect();
    if names.is_empty() {
        return Err(DataError::SchemaMismatch("table has no feature columns".into()).into());
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let x = table.matrix_of(&refs)?;
    Ok(backward_eliminate_matrix(spec, &x, &y, &names, min_features, 5, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::KnnParams;

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|j| format!("f{j}")).collect()
    }

    #[test]
    fn perfect_predictor_retained() {
        let rows: Vec<[f64; 3]> = (0..40)
            .map(|i| [i as f64, ((i * 7) % 11) as f64, ((i * 3) % 5) as f64])
            .collect();
        let y: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let r = backward_eliminate_matrix(&ModelSpec::Linear, &Matrix::from_rows(&rows), &y, &names(3), 1, 5, 2).unwrap();
        assert!(r.selected.contains(&"f0".to_string()));
        for w in r.steps.windows(2) {
            assert!(w[1].score > w[0].score);
        }
        if let Some(first) = r.steps.first() {
            assert!(first.score > r.initial_score);
        }
    }

    #[test]
    fn noise_target_eliminated_to_minimum() {
        // The target ignores every feature; each feature only adds kNN
        // distance noise, so removals keep improving until one is left.
        let rows: Vec<[f64; 3]> = (0..60)
            .map(|i| [((i * 17) % 23) as f64, ((i * 7) % 11) as f64, ((i * 3) % 13) as f64])
            .collect();
        let y: Vec<f64> = (0..60).map(|i| ((i * 31) % 7) as f64).collect();
        let spec = ModelSpec::Knn(KnnParams { k: 5, ..Default::default() });
        let r = backward_eliminate_matrix(&spec, &Matrix::from_rows(&rows), &y, &names(3), 1, 5, 4).unwrap();
        assert!(r.selected.len() <= 3);
        assert_eq!(r.steps.len() + r.selected.len(), 3);
        assert!(backward_eliminate_matrix(&spec, &Matrix::from_rows(&rows), &y, &names(3), 0, 5, 4).is_err());
    }
}
