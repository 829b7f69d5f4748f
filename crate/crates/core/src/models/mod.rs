//! Regressors behind one fit/predict contract.
//!
//! [`ModelSpec`] is the serializable configuration of any model in the
//! crate, including tree models and ensembles; [`ModelSpec::fit`] returns a
//! [`FittedModel`] whose `predict` accepts only rows of the training width.

pub mod knn;
pub mod linear;
pub mod mlp;
pub mod svr;

use serde::{Deserialize, Serialize};

use crate::ensembles::{StackingModel, StackingSpec, VotingModel, VotingSpec};
use crate::metrics::MetricsError;
use crate::rng::derive_seed;
use crate::tree::{ForestModel, ForestParams, GbtModel, GbtParams, TreeModel, TreeParams};
use crate::Matrix;

pub use knn::{DistanceMetric, KnnModel, KnnParams};
pub use linear::{LinearModel, RidgeParams};
pub use mlp::{Activation, MlpModel, MlpParams};
pub use svr::{Kernel, SvrModel, SvrParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("empty training data")]
    EmptyData,
    #[error("{rows} rows in X but {targets} targets")]
    LengthMismatch { rows: usize, targets: usize },
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value in training data")]
    NonFinite,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("k = {k} exceeds training size {n}")]
    InvalidK { k: usize, n: usize },
    #[error("{folds} folds invalid for {n} rows")]
    InvalidFolds { folds: usize, n: usize },
    #[error("solver did not converge after {iterations} iterations (KKT violation {violation:.3e})")]
    Convergence { iterations: usize, violation: f64 },
    #[error("training diverged at epoch {epoch}")]
    Divergence { epoch: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("member {index} ({name}) failed: {source}")]
    Member {
        index: usize,
        name: String,
        #[source]
        source: Box<ModelError>,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl ModelError {
    /// Short tag for report failure markers.
    pub fn tag(&self) -> &'static str {
        match self {
            ModelError::EmptyData => "EmptyData",
            ModelError::LengthMismatch { .. } => "LengthMismatch",
            ModelError::DimensionMismatch { .. } => "DimensionMismatch",
            ModelError::NonFinite => "NonFinite",
            ModelError::InvalidParams(_) => "InvalidParams",
            ModelError::InvalidK { .. } => "InvalidK",
            ModelError::InvalidFolds { .. } => "InvalidFolds",
            ModelError::Convergence { .. } => "ConvergenceError",
            ModelError::Divergence { .. } => "DivergenceError",
            ModelError::Unsupported(_) => "Unsupported",
            ModelError::Member { source, .. } => source.tag(),
            ModelError::Metrics(MetricsError::ConstantVector) => "ConstantVector",
            ModelError::Metrics(_) => "MetricsError",
        }
    }
}

/// Checks the shared fit preconditions.
pub(crate) fn check_training(x: &Matrix, y: &[f64]) -> Result<(), ModelError> {
    if x.nrows() != y.len() {
        return Err(ModelError::LengthMismatch {
            rows: x.nrows(),
            targets: y.len(),
        });
    }
    if y.is_empty() {
        return Err(ModelError::EmptyData);
    }
    if !x.as_slice().iter().chain(y).all(|v| v.is_finite()) {
        return Err(ModelError::NonFinite);
    }
    Ok(())
}

/// Configuration of any model in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Linear,
    Ridge(RidgeParams),
    Mlp(MlpParams),
    Knn(KnnParams),
    Svr(SvrParams),
    Tree(TreeParams),
    Forest(ForestParams),
    Gbt(GbtParams),
    Voting(VotingSpec),
    Stacking(StackingSpec),
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Linear => "linear",
            ModelSpec::Ridge(_) => "ridge",
            ModelSpec::Mlp(_) => "mlp",
            ModelSpec::Knn(_) => "knn",
            ModelSpec::Svr(_) => "svr",
            ModelSpec::Tree(_) => "tree",
            ModelSpec::Forest(_) => "forest",
            ModelSpec::Gbt(_) => "gbt",
            ModelSpec::Voting(_) => "voting",
            ModelSpec::Stacking(_) => "stacking",
        }
    }

    pub fn fit(&self, x: &Matrix, y: &[f64]) -> Result<FittedModel, ModelError> {
        check_training(x, y)?;
        Ok(match self {
            ModelSpec::Linear => FittedModel::Linear(linear::ols_fit(x, y)?),
            ModelSpec::Ridge(p) => FittedModel::Linear(linear::ridge_fit(x, y, p)?),
            ModelSpec::Mlp(p) => FittedModel::Mlp(mlp::mlp_fit(x, y, p)?),
            ModelSpec::Knn(p) => FittedModel::Knn(knn::knn_fit(x, y, p)?),
            ModelSpec::Svr(p) => FittedModel::Svr(svr::svr_fit(x, y, p)?),
            ModelSpec::Tree(p) => FittedModel::Tree(crate::tree::tree_fit(x, y, p)?),
            ModelSpec::Forest(p) => FittedModel::Forest(crate::tree::forest_fit(x, y, p)?),
            ModelSpec::Gbt(p) => FittedModel::Gbt(crate::tree::gbt_fit(x, y, p)?),
            ModelSpec::Voting(s) => FittedModel::Voting(crate::ensembles::voting_fit(s, x, y)?),
            ModelSpec::Stacking(s) => {
                FittedModel::Stacking(crate::ensembles::stacking_fit(s, x, y)?)
            }
        })
    }

    /// Replaces every seed in the spec, recursively, with streams derived
    /// from `seed`.
    pub fn reseed(&mut self, seed: u64) {
        match self {
            ModelSpec::Mlp(p) => p.seed = seed,
            ModelSpec::Forest(p) => p.seed = seed,
            ModelSpec::Gbt(p) => p.seed = seed,
            ModelSpec::Voting(s) => {
                for (i, m) in s.members.iter_mut().enumerate() {
                    m.reseed(derive_seed(seed, i as u64));
                }
            }
            ModelSpec::Stacking(s) => {
                s.seed = seed;
                for (i, m) in s.bases.iter_mut().enumerate() {
                    m.reseed(derive_seed(seed, i as u64));
                }
                s.final_estimator
                    .reseed(derive_seed(seed, s.bases.len() as u64));
            }
            ModelSpec::Linear
            | ModelSpec::Ridge(_)
            | ModelSpec::Knn(_)
            | ModelSpec::Svr(_)
            | ModelSpec::Tree(_) => {}
        }
    }
}

/// A trained regressor.
#[derive(Debug, Clone)]
pub enum FittedModel {
    Linear(LinearModel),
    Mlp(MlpModel),
    Knn(KnnModel),
    Svr(SvrModel),
    Tree(TreeModel),
    Forest(ForestModel),
    Gbt(GbtModel),
    Voting(VotingModel),
    Stacking(StackingModel),
}

impl FittedModel {
    pub fn feature_count(&self) -> usize {
        match self {
            FittedModel::Linear(m) => m.coefficients.len(),
            FittedModel::Mlp(m) => m.feature_count(),
            FittedModel::Knn(m) => m.feature_count(),
            FittedModel::Svr(m) => m.feature_count(),
            FittedModel::Tree(m) => m.feature_count(),
            FittedModel::Forest(m) => m.feature_count(),
            FittedModel::Gbt(m) => m.feature_count(),
            FittedModel::Voting(m) => m.feature_count(),
            FittedModel::Stacking(m) => m.feature_count(),
        }
    }

    /// Prediction for one row of length `feature_count()`.
    pub fn predict_row(&self, x: &[f64]) -> Result<f64, ModelError> {
        if x.len() != self.feature_count() {
            return Err(ModelError::DimensionMismatch {
                expected: self.feature_count(),
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>, ModelError> {
        if x.ncols() != self.feature_count() {
            return Err(ModelError::DimensionMismatch {
                expected: self.feature_count(),
                got: x.ncols(),
            });
        }
        Ok(match self {
            FittedModel::Knn(m) => m.predict_matrix(x),
            FittedModel::Stacking(m) => m.predict_matrix(x),
            _ => x.rows_iter().map(|r| self.predict_unchecked(r)).collect(),
        })
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            FittedModel::Linear(m) => m.predict_row(x),
            FittedModel::Mlp(m) => m.predict_row(x),
            FittedModel::Knn(m) => m.predict_row(x),
            FittedModel::Svr(m) => m.predict_row(x),
            FittedModel::Tree(m) => m.predict_row(x),
            FittedModel::Forest(m) => m.predict_row(x),
            FittedModel::Gbt(m) => m.predict_row(x),
            FittedModel::Voting(m) => m.predict_row(x),
            FittedModel::Stacking(m) => m.predict_row(x),
        }
    }
}
