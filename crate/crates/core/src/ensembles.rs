//! Voting and stacking meta-regressors.
//!
//! Voting averages its members' predictions with equal weights. Stacking
//! builds an `n × |bases|` matrix of out-of-fold base predictions, fits the
//! final estimator on it, and refits every base on all rows for
//! prediction.
//!
//! Named presets:
//!
//! * `vote-paper`: decision tree, gradient boosting and random forest.
//! * `stack-paper`: linear regression, MLP, kNN, SVR and decision tree
//!   bases; the final estimator is a vote of gradient boosting and random
//!   forest.
//! * `stack-weak`: kNN and linear regression bases with the same final vote.

use serde::{Deserialize, Serialize};

use crate::experiment::ModelCatalog;
use crate::folds::{complement, kfold_indices};
use crate::models::{FittedModel, ModelError, ModelSpec};
use crate::rng::derive_seed;
use crate::Matrix;

pub const PRESET_NAMES: [&str; 3] = ["vote-paper", "stack-paper", "stack-weak"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VotingSpec {
    pub members: Vec<ModelSpec>,
}

fn default_folds() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackingSpec {
    pub bases: Vec<ModelSpec>,
    pub final_estimator: Box<ModelSpec>,
    #[serde(default = "default_folds")]
    pub folds: usize,
    /// Fold shuffling seed.
    #[serde(default)]
    pub seed: u64,
}

fn member_error(index: usize, spec: &ModelSpec, e: ModelError) -> ModelError {
    ModelError::Member {
        index,
        name: spec.name().to_string(),
        source: Box::new(e),
    }
}

#[derive(Debug, Clone)]
pub struct VotingModel {
    members: Vec<FittedModel>,
}

impl VotingModel {
    pub fn members(&self) -> &[FittedModel] {
        &self.members
    }

    pub fn feature_count(&self) -> usize {
        self.members[0].feature_count()
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.members
            .iter()
            .map(|m| m.predict_unchecked(x))
            .sum::<f64>()
            / self.members.len() as f64
    }
}

pub fn voting_fit(spec: &VotingSpec, x: &Matrix, y: &[f64]) -> Result<VotingModel, ModelError> {
    if spec.members.len() < 2 {
        return Err(ModelError::InvalidParams("voting needs at least 2 members".into()));
    }
    let members = spec
        .members
        .iter()
        .enumerate()
        .map(|(i, s)| s.fit(x, y).map_err(|e| member_error(i, s, e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VotingModel { members })
}

/// Out-of-fold meta-features and the folds that produced them.
#[derive(Debug, Clone)]
pub struct OutOfFold {
    /// `n × |bases|`; row i holds predictions from models that never saw i.
    pub meta: Matrix,
    /// Held-out rows of each fold.
    pub folds: Vec<Vec<usize>>,
}

pub fn out_of_fold(
    bases: &[ModelSpec],
    x: &Matrix,
    y: &[f64],
    folds: usize,
    seed: u64,
) -> Result<OutOfFold, ModelError> {
    let n = y.len();
    let fold_rows = kfold_indices(n, folds, seed)?;
    let mut meta = Matrix::zeros(n, bases.len());
    for held in &fold_rows {
        let train = complement(n, held);
        let (xt, yt) = (x.select_rows(&train), train.iter().map(|&i| y[i]).collect::<Vec<_>>());
        let xh = x.select_rows(held);
        for (b, spec) in bases.iter().enumerate() {
            let m = spec.fit(&xt, &yt).map_err(|e| member_error(b, spec, e))?;
            for (k, p) in m.predict(&xh)?.into_iter().enumerate() {
                meta.set(held[k], b, p);
            }
        }
    }
    Ok(OutOfFold {
        meta,
        folds: fold_rows,
    })
}

#[derive(Debug, Clone)]
pub struct StackingModel {
    bases: Vec<FittedModel>,
    final_model: Box<FittedModel>,
    oof: OutOfFold,
    feature_count: usize,
}

impl StackingModel {
    pub fn bases(&self) -> &[FittedModel] {
        &self.bases
    }

    pub fn final_model(&self) -> &FittedModel {
        &self.final_model
    }

    pub fn out_of_fold(&self) -> &OutOfFold {
        &self.oof
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        let meta: Vec<f64> = self.bases.iter().map(|b| b.predict_unchecked(x)).collect();
        self.final_model.predict_unchecked(&meta)
    }

    pub(crate) fn predict_matrix(&self, x: &Matrix) -> Vec<f64> {
        let mut meta = Matrix::zeros(x.nrows(), self.bases.len());
        for (b, base) in self.bases.iter().enumerate() {
            let preds = base.predict(x).expect("width checked by caller");
            for (i, p) in preds.into_iter().enumerate() {
                meta.set(i, b, p);
            }
        }
        self.final_model.predict(&meta).expect("meta width matches")
    }
}

pub fn stacking_fit(spec: &StackingSpec, x: &Matrix, y: &[f64]) -> Result<StackingModel, ModelError> {
    if spec.bases.is_empty() {
        return Err(ModelError::InvalidParams("stacking needs at least 1 base".into()));
    }
    let oof = out_of_fold(&spec.bases, x, y, spec.folds, derive_seed(spec.seed, 0))?;
    let final_model = spec
        .final_estimator
        .fit(&oof.meta, y)
        .map_err(|e| member_error(spec.bases.len(), &spec.final_estimator, e))?;
    let bases = spec
        .bases
        .iter()
        .enumerate()
        .map(|(i, s)| s.fit(x, y).map_err(|e| member_error(i, s, e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StackingModel {
        bases,
        final_model: Box::new(final_model),
        oof,
        feature_count: x.ncols(),
    })
}

/// Builds a named preset from the catalog's per-model hyperparameters.
pub fn preset(name: &str, catalog: &ModelCatalog) -> Option<ModelSpec> {
    let final_vote = || {
        Box::new(ModelSpec::Voting(VotingSpec {
            members: vec![
                ModelSpec::Gbt(catalog.gradient_boosting.clone()),
                ModelSpec::Forest(catalog.random_forest.clone()),
            ],
        }))
    };
    match name {
        "vote-paper" => Some(ModelSpec::Voting(VotingSpec {
            members: vec![
                ModelSpec::Tree(catalog.decision_tree.clone()),
                ModelSpec::Gbt(catalog.gradient_boosting.clone()),
                ModelSpec::Forest(catalog.random_forest.clone()),
            ],
        })),
        "stack-paper" => Some(ModelSpec::Stacking(StackingSpec {
            bases: vec![
                ModelSpec::Linear,
                ModelSpec::Mlp(catalog.mlp.clone()),
                ModelSpec::Knn(catalog.knn.clone()),
                ModelSpec::Svr(catalog.svr.clone()),
                ModelSpec::Tree(catalog.decision_tree.clone()),
            ],
            final_estimator: final_vote(),
            folds: catalog.stacking_folds,
            seed: 0,
        })),
        "stack-weak" => Some(ModelSpec::Stacking(StackingSpec {
            bases: vec![ModelSpec::Knn(catalog.knn.clone()), ModelSpec::Linear],
            final_estimator: final_vote(),
            folds: catalog.stacking_folds,
            seed: 0,
        })),
        _ => None,
    }
}
