use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensembles::preset;
use crate::models::{Kernel, KnnParams, MlpParams, ModelSpec, RidgeParams, SvrParams};
use crate::tree::{ForestParams, GbtParams, TreeParams};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Models addressable from a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelId {
    LinearRegression,
    RidgeRegression,
    #[serde(rename = "MLPRegression")]
    MlpRegression,
    #[serde(rename = "KNN")]
    Knn,
    #[serde(rename = "SVR")]
    Svr,
    DecisionTree,
    GradientBoosting,
    RandomForest,
    #[serde(rename = "vote-paper")]
    VotePaper,
    #[serde(rename = "stack-paper")]
    StackPaper,
    #[serde(rename = "stack-weak")]
    StackWeak,
}

impl ModelId {
    pub const ALL: [ModelId; 11] = [
        ModelId::LinearRegression,
        ModelId::RidgeRegression,
        ModelId::MlpRegression,
        ModelId::Knn,
        ModelId::Svr,
        ModelId::DecisionTree,
        ModelId::GradientBoosting,
        ModelId::RandomForest,
        ModelId::VotePaper,
        ModelId::StackPaper,
        ModelId::StackWeak,
    ];

    /// The eight single-model regressors.
    pub const INDEPENDENT: [ModelId; 8] = [
        ModelId::LinearRegression,
        ModelId::RidgeRegression,
        ModelId::MlpRegression,
        ModelId::Knn,
        ModelId::Svr,
        ModelId::DecisionTree,
        ModelId::GradientBoosting,
        ModelId::RandomForest,
    ];

    /// Row label in result tables.
    pub fn label(self) -> &'static str {
        match self {
            ModelId::LinearRegression => "Linear Regression",
            ModelId::RidgeRegression => "Ridge Regression",
            ModelId::MlpRegression => "MLP Regression",
            ModelId::Knn => "KNN",
            ModelId::Svr => "SVM",
            ModelId::DecisionTree => "Decision Tree",
            ModelId::GradientBoosting => "Gradient Boosting",
            ModelId::RandomForest => "Random Forest",
            ModelId::VotePaper => "Voting (DT+GB+RF)",
            ModelId::StackPaper => "Stacking (LR+MLP+KNN+SVR+DT)",
            ModelId::StackWeak => "Stacking (KNN+LR)",
        }
    }

    /// Lowercase identifier used in file names.
    pub fn slug(self) -> &'static str {
        match self {
            ModelId::LinearRegression => "linear_regression",
            ModelId::RidgeRegression => "ridge_regression",
            ModelId::MlpRegression => "mlp_regression",
            ModelId::Knn => "knn",
            ModelId::Svr => "svr",
            ModelId::DecisionTree => "decision_tree",
            ModelId::GradientBoosting => "gradient_boosting",
            ModelId::RandomForest => "random_forest",
            ModelId::VotePaper => "vote_paper",
            ModelId::StackPaper => "stack_paper",
            ModelId::StackWeak => "stack_weak",
        }
    }

    fn ordinal(self) -> u64 {
        ModelId::ALL.iter().position(|&m| m == self).expect("listed") as u64
    }

    /// Stream index for this model's seed, independent of list position.
    pub(crate) fn seed_stream(self) -> u64 {
        self.ordinal()
    }
}

fn default_stacking_folds() -> usize {
    5
}

/// Hyperparameters per model family; presets are assembled from these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelCatalog {
    #[serde(rename = "RidgeRegression")]
    pub ridge: RidgeParams,
    #[serde(rename = "MLPRegression")]
    pub mlp: MlpParams,
    #[serde(rename = "KNN")]
    pub knn: KnnParams,
    #[serde(rename = "SVR")]
    pub svr: SvrParams,
    #[serde(rename = "DecisionTree")]
    pub decision_tree: TreeParams,
    #[serde(rename = "GradientBoosting")]
    pub gradient_boosting: GbtParams,
    #[serde(rename = "RandomForest")]
    pub random_forest: ForestParams,
    #[serde(default = "default_stacking_folds")]
    pub stacking_folds: usize,
}

impl Default for ModelCatalog {
    fn default() -> Self {
        Self {
            ridge: RidgeParams::default(),
            mlp: MlpParams::default(),
            knn: KnnParams::default(),
            svr: SvrParams::default(),
            decision_tree: TreeParams::default(),
            gradient_boosting: GbtParams::default(),
            random_forest: ForestParams::default(),
            stacking_folds: default_stacking_folds(),
        }
    }
}

impl ModelCatalog {
    pub fn spec_for(&self, id: ModelId) -> ModelSpec {
        match id {
            ModelId::LinearRegression => ModelSpec::Linear,
            ModelId::RidgeRegression => ModelSpec::Ridge(self.ridge.clone()),
            ModelId::MlpRegression => ModelSpec::Mlp(self.mlp.clone()),
            ModelId::Knn => ModelSpec::Knn(self.knn.clone()),
            ModelId::Svr => ModelSpec::Svr(self.svr.clone()),
            ModelId::DecisionTree => ModelSpec::Tree(self.decision_tree.clone()),
            ModelId::GradientBoosting => ModelSpec::Gbt(self.gradient_boosting.clone()),
            ModelId::RandomForest => ModelSpec::Forest(self.random_forest.clone()),
            ModelId::VotePaper => preset("vote-paper", self).expect("preset exists"),
            ModelId::StackPaper => preset("stack-paper", self).expect("preset exists"),
            ModelId::StackWeak => preset("stack-weak", self).expect("preset exists"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Synth {
        n: usize,
        noise_sigma: f64,
        seed: u64,
    },
    /// Relative paths resolve against the config file's directory.
    Csv { path: PathBuf },
}

fn default_selection_model() -> ModelSpec {
    ModelSpec::Knn(KnnParams {
        k: 10,
        ..KnnParams::default()
    })
}

fn default_selection_folds() -> usize {
    5
}

fn default_min_features() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSelection {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_selection_model")]
    pub model: ModelSpec,
    #[serde(default = "default_selection_folds")]
    pub folds: usize,
    #[serde(default = "default_min_features")]
    pub min_features: usize,
}

impl Default for FeatureSelection {
    fn default() -> Self {
        Self {
            enabled: false,
            model: default_selection_model(),
            folds: default_selection_folds(),
            min_features: default_min_features(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Knn,
    Svr,
    Rf,
}

impl SweepKind {
    pub const ALL: [SweepKind; 3] = [SweepKind::Knn, SweepKind::Svr, SweepKind::Rf];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Knn => "knn",
            SweepKind::Svr => "svr",
            SweepKind::Rf => "rf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Sweeps that `run` also emits.
    pub include_in_run: Vec<SweepKind>,
    pub knn_k: Vec<usize>,
    pub svr_kernels: Vec<Kernel>,
    pub rf_trees: Vec<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            include_in_run: Vec::new(),
            knn_k: (1..=20).collect(),
            svr_kernels: ["sigmoid", "rbf", "polynomial"]
                .iter()
                .map(|n| Kernel::from_name(n).expect("known kernel"))
                .collect(),
            rf_trees: vec![1, 10, 50, 100, 200],
        }
    }
}

fn default_fractions() -> Vec<f64> {
    vec![0.8]
}

fn default_seed() -> u64 {
    42
}

fn default_cv_folds() -> usize {
    10
}

/// Declarative description of one benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub data: DataSource,
    pub targets: Vec<String>,
    pub models: Vec<ModelId>,
    /// The first fraction drives the main tables; more than one also
    /// produces a split study.
    #[serde(default = "default_fractions")]
    pub split_fractions: Vec<f64>,
    /// Master seed for splitting, CV folds, selection and model seeds.
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub hyperparameters: ModelCatalog,
    #[serde(default)]
    pub feature_selection: FeatureSelection,
    /// Folds for the CV score distributions; 0 disables them.
    #[serde(default = "default_cv_folds")]
    pub cv_folds: usize,
    #[serde(default)]
    pub sweeps: SweepConfig,
}

pub(crate) const KNOWN_TARGETS: [&str; 4] = ["SEF", "SCI", "OMF", "RRR"];

impl ExperimentSpec {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_json(&text, base).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    /// Parses and validates JSON; CSV paths resolve against `base_dir`.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let mut spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: "<string>".into(),
            message: e.to_string(),
        })?;
        if let DataSource::Csv { path } = &mut spec.data {
            if path.is_relative() {
                *path = base_dir.join(&*path);
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.targets.is_empty() {
            return bad("at least one target is required".into());
        }
        for (i, t) in self.targets.iter().enumerate() {
            if !KNOWN_TARGETS.contains(&t.as_str()) {
                return bad(format!("unknown target `{t}`; expected one of {KNOWN_TARGETS:?}"));
            }
            if self.targets[..i].contains(t) {
                return bad(format!("target `{t}` listed twice"));
            }
        }
        if self.models.is_empty() {
            return bad("at least one model is required".into());
        }
        for (i, m) in self.models.iter().enumerate() {
            if self.models[..i].contains(m) {
                return bad(format!("model {m:?} listed twice"));
            }
        }
        if self.split_fractions.is_empty() {
            return bad("split_fractions must not be empty".into());
        }
        for &f in &self.split_fractions {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("split fraction {f} outside (0, 1)"));
            }
        }
        if self.cv_folds == 1 {
            return bad("cv_folds must be 0 (disabled) or >= 2".into());
        }
        if let DataSource::Synth { n, noise_sigma, .. } = self.data {
            if n == 0 {
                return bad("synth n must be >= 1".into());
            }
            if noise_sigma.is_nan() || noise_sigma < 0.0 {
                return bad("synth noise_sigma must be >= 0".into());
            }
        }
        if self.feature_selection.folds < 2 || self.feature_selection.min_features == 0 {
            return bad("feature_selection needs folds >= 2 and min_features >= 1".into());
        }
        if self.hyperparameters.stacking_folds < 2 {
            return bad("stacking_folds must be >= 2".into());
        }
        Ok(())
    }

    /// Spec of `id` with seeds derived from the master seed.
    pub fn model_spec(&self, id: ModelId) -> ModelSpec {
        let mut spec = self.hyperparameters.spec_for(id);
        let base = crate::rng::derive_seed(self.seed, crate::rng::stream::MODELS);
        spec.reseed(crate::rng::derive_seed(base, id.seed_stream()));
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "data": {"source": "synth", "n": 50, "noise_sigma": 0.1, "seed": 1},
        "targets": ["SEF"],
        "models": ["LinearRegression", "vote-paper"]
    }"#;

    #[test]
    fn minimal_config_defaults() {
        let s = ExperimentSpec::from_json(MINIMAL, Path::new(".")).unwrap();
        assert_eq!(s.split_fractions, vec![0.8]);
        assert_eq!(s.cv_folds, 10);
        assert_eq!(s.seed, 42);
        assert_eq!(s.hyperparameters, ModelCatalog::default());
        assert!(!s.feature_selection.enabled);
    }

    #[test]
    fn partial_overrides() {
        let text = MINIMAL.replace(
            r#""models""#,
            r#""hyperparameters": {"RandomForest": {"n_trees": 7}, "KNN": {"k": 3}}, "models""#,
        );
        let s = ExperimentSpec::from_json(&text, Path::new(".")).unwrap();
        assert_eq!(s.hyperparameters.random_forest.n_trees, 7);
        assert!(s.hyperparameters.random_forest.bootstrap);
        assert_eq!(s.hyperparameters.knn.k, 3);
    }

    #[test]
    fn rejects_invalid() {
        for (from, to) in [
            (r#"["SEF"]"#, r#"["XYZ"]"#),
            (r#"["SEF"]"#, r#"[]"#),
            (r#""vote-paper""#, r#""LinearRegression""#),
            (r#""n": 50"#, r#""n": 0"#),
        ] {
            let text = MINIMAL.replace(from, to);
            assert!(ExperimentSpec::from_json(&text, Path::new(".")).is_err(), "{to}");
        }
        let text = MINIMAL.replace(r#""targets""#, r#""bogus": 1, "targets""#);
        assert!(matches!(
            ExperimentSpec::from_json(&text, Path::new(".")),
            Err(ConfigError::Parse { .. })
        ));
        let text = MINIMAL.replace(r#""targets""#, r#""split_fractions": [1.0], "targets""#);
        assert!(ExperimentSpec::from_json(&text, Path::new(".")).is_err());
    }

    #[test]
    fn csv_path_resolves_against_config_dir() {
        let text = r#"{"data": {"source": "csv", "path": "d.csv"}, "targets": ["SEF"], "models": ["KNN"]}"#;
        let s = ExperimentSpec::from_json(text, Path::new("/cfg")).unwrap();
        assert_eq!(s.data, DataSource::Csv { path: PathBuf::from("/cfg/d.csv") });
    }

    #[test]
    fn model_seeds_do_not_depend_on_list_position() {
        let a = ExperimentSpec::from_json(MINIMAL, Path::new(".")).unwrap();
        let mut b = a.clone();
        b.models.reverse();
        assert_eq!(a.model_spec(ModelId::VotePaper), b.model_spec(ModelId::VotePaper));
        assert_ne!(
            a.model_spec(ModelId::RandomForest),
            ExperimentSpec { seed: 7, ..a.clone() }.model_spec(ModelId::RandomForest)
        );
    }

    #[test]
    fn ids_roundtrip_through_json() {
        for id in ModelId::ALL {
            let j = serde_json::to_string(&id).unwrap();
            assert_eq!(serde_json::from_str::<ModelId>(&j).unwrap(), id);
        }
    }
}
