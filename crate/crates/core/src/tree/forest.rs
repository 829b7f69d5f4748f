//! Bagged random forest.
//!
//! Tree `t` draws from its own generator seeded with
//! `derive_seed(seed, t)`: first the bootstrap sample (n draws with
//! replacement), then, at every node, a shuffle of the feature indices.
//! The first `max_features` features that vary within the node are scanned.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cart::{build_tree, FeatureSampler};
use super::{TreeModel, TreeParams};
use crate::models::{check_training, ModelError};
use crate::rng::{derive_seed, seeded};
use crate::Matrix;

/// Features considered per split: an absolute count or a fraction of p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaxFeatures {
    Count(usize),
    Fraction(f64),
}

impl MaxFeatures {
    pub fn resolve(&self, p: usize) -> Result<usize, ModelError> {
        match *self {
            MaxFeatures::Count(c) if c >= 1 && c <= p => Ok(c),
            MaxFeatures::Fraction(f) if f > 0.0 && f <= 1.0 => Ok(((f * p as f64).floor() as usize).max(1)),
            other => Err(ModelError::InvalidParams(format!(
                "max_features {other:?} invalid for {p} features"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` means `max(1, floor(p / 3))`.
    pub max_features: Option<MaxFeatures>,
    pub bootstrap: bool,
    pub seed: u64,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_features: None,
            bootstrap: true,
            seed: 0,
            tree: TreeParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    trees: Vec<TreeModel>,
    feature_count: usize,
}

impl ForestModel {
    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn trees(&self) -> &[TreeModel] {
        &self.trees
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_row(x)).sum::<f64>() / self.trees.len() as f64
    }
}

pub fn forest_fit(x: &Matrix, y: &[f64], params: &ForestParams) -> Result<ForestModel, ModelError> {
    check_training(x, y)?;
    params.tree.validate()?;
    if params.n_trees == 0 {
        return Err(ModelError::InvalidParams("n_trees must be >= 1".into()));
    }
    let (n, p) = (y.len(), x.ncols());
    let max_features = match params.max_features {
        Some(m) => m.resolve(p)?,
        None => (p / 3).max(1),
    };
    let trees = (0..params.n_trees)
        .map(|t| {
            let mut rng = seeded(derive_seed(params.seed, t as u64));
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let sampler = FeatureSampler {
                max_features,
                rng: &mut rng,
            };
            build_tree(x, y, &rows, &params.tree, Some(sampler))
        })
        .collect();
    Ok(ForestModel {
        trees,
        feature_count: p,
    })
}
