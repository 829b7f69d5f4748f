//! Impurity-based feature importance.
//!
//! Each split credits its feature with the SSR decrease it achieves,
//! `SSR(node) - SSR(left) - SSR(right)`. Being a sum over the node's
//! samples, this is the per-sample impurity decrease weighted by node size.
//! Credits are summed per tree, averaged over trees and normalized to sum
//! to 1; a model with no splits yields all zeros.

use super::TreeModel;
use crate::models::{FittedModel, ModelError};

pub fn feature_importance(model: &FittedModel) -> Result<Vec<f64>, ModelError> {
    let trees: Vec<&TreeModel> = match model {
        FittedModel::Forest(f) => f.trees().iter().collect(),
        FittedModel::Gbt(g) => g.trees().iter().collect(),
        FittedModel::Tree(t) => vec![t],
        _ => {
            return Err(ModelError::Unsupported(
                "feature importance requires a tree-based model".into(),
            ))
        }
    };
    let p = model.feature_count();
    let mut total = vec![0.0; p];
    for t in &trees {
        for (acc, v) in total.iter_mut().zip(t.ssr_decrease()) {
            *acc += v;
        }
    }
    if !trees.is_empty() {
        for v in total.iter_mut() {
            *v /= trees.len() as f64;
        }
    }
    let sum: f64 = total.iter().sum();
    if sum > 0.0 {
        for v in total.iter_mut() {
            *v /= sum;
        }
    }
    Ok(total)
}
