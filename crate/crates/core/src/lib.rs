//! Regression toolkit and benchmark harness for biomass sustainability
//! indicators: soil erosion factor (SEF), soil conditioning index (SCI),
//! organic matter factor (OMF) and residue removal rate (RRR).
//!
//! The crate is organised bottom-up:
//!
//! * [`data`]: feature schema, seeded synthetic generator, CSV I/O,
//!   standardization and train/test splitting.
//! * [`metrics`]: R² (squared Pearson correlation), RMSE, MAE.
//! * [`models`]: linear/ridge, kNN, ε-SVR and MLP regressors plus the
//!   [`models::ModelSpec`] / [`models::FittedModel`] enums that tie every
//!   regressor together.
//! * [`tree`]: CART, random forest, gradient boosting and impurity
//!   importance.
//! * [`ensembles`]: voting and stacking meta-regressors.
//! * [`selection`]: k-fold CV, backward feature elimination and
//!   hyperparameter sweeps.
//! * [`experiment`]: JSON-configured benchmark runs and report emission.
//!
//! The `biosustain` binary is a thin command-line front end over
//! [`experiment`].

pub mod data;
pub mod ensembles;
pub mod error;
pub mod experiment;
pub mod folds;
pub mod matrix;
pub mod metrics;
pub mod models;
pub mod rng;
pub mod selection;
pub mod tree;

pub use error::{Error, ErrorCategory};
pub use matrix::Matrix;
