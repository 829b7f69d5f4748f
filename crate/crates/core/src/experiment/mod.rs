//! Config-driven benchmark runs and report emission.
//!
//! A run loads or synthesizes data, splits it, standardizes inputs on the
//! training split, optionally applies backward elimination (training split
//! only), fits every requested model and scores train and test. Every
//! output is returned as an in-memory [`Artifact`] so the CLI writes
//! exactly what the library produced.

mod config;
pub mod report;
mod runner;

pub use config::{
    ConfigError, DataSource, ExperimentSpec, FeatureSelection, ModelCatalog, ModelId, SweepConfig,
    SweepKind,
};
pub use report::{ModelOutcome, ResultsRow, ResultsTable, SplitStudy};
pub use runner::{
    importance_artifacts, load_table, prepare_target, run_experiment, run_split_study,
    selection_artifacts, sweep_artifacts, write_artifacts, Artifact, ExperimentOutput,
    PreparedTarget, TargetReport,
};
