//! Cross-validation, backward feature elimination and hyperparameter
//! sweeps.

mod cv;
mod elimination;
mod sweep;

pub use cv::{k_fold_cv, CvResult};
pub use elimination::{backward_eliminate, backward_eliminate_matrix, EliminationResult, EliminationStep};
pub use sweep::{
    sweep_knn_k, sweep_rf_trees, sweep_svr_kernel, SweepCell, SweepPoint, SweepResult, TargetData,
};
