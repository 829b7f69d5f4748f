use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::config::{DataSource, ExperimentSpec, ModelId, SweepKind};
use super::report::{failure_marker, format_sig6, metrics_tag, ModelOutcome, ResultsRow, ResultsTable, SplitStudy};
use crate::data::{load_csv, split_indices, synth_generate, ColumnStats, DataTable, FeatureSchema, SplitSpec};
use crate::metrics::{MetricsError, SplitScore};
use crate::models::{FittedModel, ModelError, ModelSpec};
use crate::rng::{derive_seed, stream};
use crate::selection::{
    backward_eliminate_matrix, k_fold_cv, sweep_knn_k, sweep_rf_trees, sweep_svr_kernel, CvResult,
    EliminationResult, SweepResult, TargetData,
};
use crate::tree::feature_importance;
use crate::Error;

/// Indicator columns used as inputs when the target is RRR.
const RRR_INDICATOR_INPUTS: [&str; 3] = ["SEF", "SCI", "OMF"];

/// One named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: impl Into<String>, contents: String) -> Self {
        Self {
            name: name.into(),
            contents,
        }
    }
}

pub fn write_artifacts(dir: impl AsRef<Path>, artifacts: &[Artifact]) -> Result<(), Error> {
    let dir = dir.as_ref();
    let io = |path: &Path, source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    for a in artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents).map_err(|e| io(&path, e))?;
    }
    Ok(())
}

/// Loads the CSV or generates the synthetic table named by the spec.
pub fn load_table(spec: &ExperimentSpec) -> Result<DataTable, Error> {
    Ok(match &spec.data {
        DataSource::Synth { n, noise_sigma, seed } => synth_generate(*n, *noise_sigma, *seed)?,
        DataSource::Csv { path } => load_csv(path, &FeatureSchema::default_schema())?,
    })
}

/// Standardized (and optionally feature-selected) split for one target.
#[derive(Debug, Clone)]
pub struct PreparedTarget {
    pub fraction: f64,
    /// Input columns before selection.
    pub candidates: Vec<String>,
    /// Input columns the models see, in matrix order.
    pub features: Vec<String>,
    pub data: TargetData,
    pub selection: Option<EliminationResult>,
    /// Standardization statistics of the candidate columns (training split).
    pub stats: ColumnStats,
}

fn candidate_inputs(table: &DataTable, target: &str) -> Vec<String> {
    let mut names: Vec<String> = table
        .schema()
        .feature_names()
        .into_iter()
        .map(String::from)
        .collect();
    if target == "RRR" {
        names.extend(RRR_INDICATOR_INPUTS.map(String::from));
    }
    names
}

fn run_selection(
    spec: &ExperimentSpec,
    x: &crate::Matrix,
    y: &[f64],
    names: &[String],
) -> Result<EliminationResult, Error> {
    let fs = &spec.feature_selection;
    let seed = derive_seed(spec.seed, stream::SELECTION);
    let mut model = fs.model.clone();
    model.reseed(seed);
    Ok(backward_eliminate_matrix(
        &model,
        x,
        y,
        names,
        fs.min_features,
        fs.folds,
        seed,
    )?)
}

/// Splits, standardizes on the training rows and, when enabled, runs
/// backward elimination on the training rows.
pub fn prepare_target(
    spec: &ExperimentSpec,
    table: &DataTable,
    target: &str,
    fraction: f64,
) -> Result<PreparedTarget, Error> {
    prepare(spec, table, target, fraction, spec.feature_selection.enabled)
}

fn prepare(
    spec: &ExperimentSpec,
    table: &DataTable,
    target: &str,
    fraction: f64,
    select: bool,
) -> Result<PreparedTarget, Error> {
    let candidates = candidate_inputs(table, target);
    let refs: Vec<&str> = candidates.iter().map(String::as_str).collect();
    let x = table.matrix_of(&refs)?;
    let y = table.column(target)?;
    let split = SplitSpec {
        train_fraction: fraction,
        seed: derive_seed(spec.seed, stream::SPLIT),
    };
    let (train, test) = split_indices(table.n(), &split)?;
    let stats = ColumnStats::fit(&x.select_rows(&train))?;
    let mut x_train = stats.apply(&x.select_rows(&train))?;
    let mut x_test = stats.apply(&x.select_rows(&test))?;
    let y_train: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let y_test: Vec<f64> = test.iter().map(|&i| y[i]).collect();
    let mut features = candidates.clone();
    let selection = if select {
        let sel = run_selection(spec, &x_train, &y_train, &candidates)?;
        x_train = x_train.select_columns(&sel.selected_indices);
        x_test = x_test.select_columns(&sel.selected_indices);
        features = sel.selected.clone();
        Some(sel)
    } else {
        None
    };
    Ok(PreparedTarget {
        fraction,
        candidates,
        features,
        data: TargetData {
            target: target.to_string(),
            x_train,
            y_train,
            x_test,
            y_test,
        },
        selection,
        stats,
    })
}

/// Order-preserving map over `items` on scoped worker threads.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut tagged: Vec<(usize, R)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(item) = items.get(i) else { break };
                        local.push((i, f(item)));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    tagged.sort_by_key(|(i, _)| *i);
    tagged.into_iter().map(|(_, r)| r).collect()
}

struct Fitted {
    model: FittedModel,
    train_pred: Vec<f64>,
    test_pred: Vec<f64>,
}

fn score(pred: &[f64], actual: &[f64]) -> Result<SplitScore, ModelError> {
    Ok(SplitScore::compute(pred, actual)?)
}

fn fit_and_score(model: &ModelSpec, data: &TargetData) -> (ModelOutcome, Option<Fitted>) {
    let run = || -> Result<(SplitScore, SplitScore, Fitted), ModelError> {
        let fitted = model.fit(&data.x_train, &data.y_train)?;
        let train_pred = fitted.predict(&data.x_train)?;
        let test_pred = fitted.predict(&data.x_test)?;
        let train = score(&train_pred, &data.y_train)?;
        let test = score(&test_pred, &data.y_test)?;
        Ok((
            train,
            test,
            Fitted {
                model: fitted,
                train_pred,
                test_pred,
            },
        ))
    };
    match run() {
        Ok((train, test, f)) => (ModelOutcome::Scored { train, test }, Some(f)),
        Err(e) => (ModelOutcome::Failed(e), None),
    }
}

/// Everything produced for one target.
#[derive(Debug, Clone)]
pub struct TargetReport {
    pub results: ResultsTable,
    pub prepared: PreparedTarget,
    /// Per requested model: CV scores on the training split, when enabled.
    pub cv: Vec<(ModelId, Result<CvResult, ModelError>)>,
    /// Random-forest importance per model input, in input order.
    pub importance: Result<Vec<(String, f64)>, ModelError>,
    pub split_study: Option<SplitStudy>,
    scatter: Vec<(ModelId, Vec<f64>, Vec<f64>)>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub targets: Vec<TargetReport>,
    pub sweeps: Vec<(SweepKind, SweepResult)>,
}

impl ExperimentOutput {
    pub fn target(&self, name: &str) -> Option<&TargetReport> {
        self.targets.iter().find(|t| t.results.target == name)
    }

    /// Every output file, in a stable order.
    pub fn artifacts(&self) -> Vec<Artifact> {
        let mut out = Vec::new();
        for t in &self.targets {
            let name = &t.results.target;
            out.push(Artifact::new(format!("results_{name}.md"), t.results.to_markdown()));
            out.push(Artifact::new(format!("results_{name}.csv"), t.results.to_csv()));
            for (id, train_pred, test_pred) in &t.scatter {
                let d = &t.prepared.data;
                for (split, pred, actual) in [
                    ("train", train_pred, &d.y_train),
                    ("test", test_pred, &d.y_test),
                ] {
                    out.push(Artifact::new(
                        format!("scatter_{name}_{}_{split}.tsv", id.slug()),
                        scatter_tsv(actual, pred),
                    ));
                }
            }
            if !t.cv.is_empty() {
                out.push(Artifact::new(format!("cvbox_{name}.tsv"), cvbox_tsv(&t.cv)));
            }
            out.push(importance_artifact(name, &t.importance));
            if let Some(sel) = &t.prepared.selection {
                out.push(selection_artifact(name, sel));
            }
            if let Some(s) = &t.split_study {
                out.push(Artifact::new(format!("split_study_{name}.md"), s.to_markdown()));
                out.push(Artifact::new(format!("split_study_{name}.csv"), s.to_csv()));
            }
        }
        for (kind, s) in &self.sweeps {
            out.push(Artifact::new(format!("sweep_{}.tsv", kind.name()), s.to_tsv()));
        }
        out
    }
}

fn scatter_tsv(actual: &[f64], pred: &[f64]) -> String {
    let mut s = String::from("actual\tpredicted\n");
    for (a, p) in actual.iter().zip(pred) {
        s += &format!("{}\t{}\n", format_sig6(*a), format_sig6(*p));
    }
    s
}

fn cvbox_tsv(cv: &[(ModelId, Result<CvResult, ModelError>)]) -> String {
    let mut s = String::from("model\tfold\tneg_mae\tr2\n");
    for (id, r) in cv {
        match r {
            Ok(r) => {
                for (i, (m, r2)) in r.neg_mae.iter().zip(&r.r2).enumerate() {
                    let r2 = match r2 {
                        Some(v) => format_sig6(*v),
                        None => failure_marker(metrics_tag(&MetricsError::ConstantVector)),
                    };
                    s += &format!("{}\t{}\t{}\t{}\n", id.label(), i + 1, format_sig6(*m), r2);
                }
            }
            Err(e) => {
                let m = failure_marker(e.tag());
                s += &format!("{}\tNA\t{m}\t{m}\n", id.label());
            }
        }
    }
    s
}

fn importance_artifact(target: &str, imp: &Result<Vec<(String, f64)>, ModelError>) -> Artifact {
    let mut s = String::from("rank\tfeature\timportance\n");
    match imp {
        Ok(v) => {
            let mut ranked: Vec<&(String, f64)> = v.iter().collect();
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
            for (i, (f, w)) in ranked.into_iter().enumerate() {
                s += &format!("{}\t{f}\t{}\n", i + 1, format_sig6(*w));
            }
        }
        Err(e) => s += &format!("NA\tNA\t{}\n", failure_marker(e.tag())),
    }
    Artifact::new(format!("importance_{target}.tsv"), s)
}

fn selection_artifact(target: &str, sel: &EliminationResult) -> Artifact {
    let mut s = String::from("step\tremoved\tcv_neg_mae\tremaining\n");
    s += &format!(
        "0\t-\t{}\t{}\n",
        format_sig6(sel.initial_score),
        sel.selected.len() + sel.steps.len()
    );
    for (i, st) in sel.steps.iter().enumerate() {
        s += &format!(
            "{}\t{}\t{}\t{}\n",
            i + 1,
            st.removed,
            format_sig6(st.score),
            st.remaining
        );
    }
    s += &format!("# selected: {}\n", sel.selected.join(", "));
    Artifact::new(format!("selection_{target}.tsv"), s)
}

fn random_forest_importance(
    spec: &ExperimentSpec,
    prepared: &PreparedTarget,
    fitted: Option<&FittedModel>,
) -> Result<Vec<(String, f64)>, ModelError> {
    let owned;
    let model = match fitted {
        Some(m) => m,
        None => {
            let d = &prepared.data;
            owned = spec.model_spec(ModelId::RandomForest).fit(&d.x_train, &d.y_train)?;
            &owned
        }
    };
    let w = feature_importance(model)?;
    Ok(prepared.features.iter().cloned().zip(w).collect())
}

fn describe_data(spec: &ExperimentSpec) -> String {
    match &spec.data {
        DataSource::Synth { n, noise_sigma, seed } => {
            format!("synthetic n={n} noise_sigma={noise_sigma} seed={seed}")
        }
        DataSource::Csv { path } => format!("csv {}", path.display()),
    }
}

fn metadata(spec: &ExperimentSpec, p: &PreparedTarget, rows: &[ResultsRow]) -> Vec<(String, String)> {
    let d = &p.data;
    let mut m: Vec<(String, String)> = vec![
        ("target".into(), d.target.clone()),
        ("data".into(), describe_data(spec)),
        ("seed".into(), spec.seed.to_string()),
        ("train_fraction".into(), p.fraction.to_string()),
        ("n_train".into(), d.y_train.len().to_string()),
        ("n_test".into(), d.y_test.len().to_string()),
        (
            "r2_definition".into(),
            "squared Pearson correlation between predictions and observations".into(),
        ),
        (
            "pearson_r_definition".into(),
            "Pearson correlation before squaring, listed per model below".into(),
        ),
        (
            "cod_definition".into(),
            "1 - SSE/SST, listed per model below".into(),
        ),
        (
            "standardization".into(),
            "z-score per input column, fitted on the training split".into(),
        ),
    ];
    let fs = &spec.feature_selection;
    m.push((
        "feature_selection".into(),
        match &p.selection {
            None => "disabled".into(),
            Some(_) => format!(
                "backward elimination, {} model, {}-fold CV negative MAE, min_features {}",
                fs.model.name(),
                fs.folds,
                fs.min_features
            ),
        },
    ));
    m.push(("features".into(), p.features.join(", ")));
    m.push((
        "hyperparameters".into(),
        serde_json::to_string(&spec.hyperparameters).expect("serializable"),
    ));
    m.push((
        "svr_kernel_resolved".into(),
        serde_json::to_string(&spec.hyperparameters.svr.kernel.resolved(p.features.len()))
            .expect("serializable"),
    ));
    m.push((
        "stacking_final_estimator".into(),
        "voting(GradientBoosting, RandomForest)".into(),
    ));
    m.push(("cv_folds".into(), spec.cv_folds.to_string()));
    for r in rows {
        if let ModelOutcome::Failed(e) = &r.outcome {
            m.push((format!("failure {}", r.label), e.to_string()));
        }
    }
    m
}

fn study_rows(
    spec: &ExperimentSpec,
    table: &DataTable,
    target: &str,
    first: Option<Vec<ModelOutcome>>,
) -> Result<SplitStudy, Error> {
    let mut per_fraction: Vec<Vec<ModelOutcome>> = Vec::new();
    for (i, &f) in spec.split_fractions.iter().enumerate() {
        match (i, &first) {
            (0, Some(o)) => per_fraction.push(o.clone()),
            _ => {
                let p = prepare_target(spec, table, target, f)?;
                per_fraction.push(par_map(&spec.models, |&id| {
                    fit_and_score(&spec.model_spec(id), &p.data).0
                }));
            }
        }
    }
    let rows = spec
        .models
        .iter()
        .enumerate()
        .map(|(j, id)| {
            (
                id.label().to_string(),
                per_fraction.iter().map(|o| o[j].clone()).collect(),
            )
        })
        .collect();
    Ok(SplitStudy {
        target: target.to_string(),
        fractions: spec.split_fractions.clone(),
        rows,
    })
}

/// Train/test R² of every model at every configured split fraction.
pub fn run_split_study(spec: &ExperimentSpec) -> Result<Vec<SplitStudy>, Error> {
    let table = load_table(spec)?;
    spec.targets
        .iter()
        .map(|t| study_rows(spec, &table, t, None))
        .collect()
}

fn run_target(spec: &ExperimentSpec, table: &DataTable, target: &str) -> Result<TargetReport, Error> {
    let prepared = prepare_target(spec, table, target, spec.split_fractions[0])?;
    let d = &prepared.data;
    let mut rows = Vec::new();
    let mut scatter = Vec::new();
    let mut forest = None;
    let fits = par_map(&spec.models, |&id| fit_and_score(&spec.model_spec(id), d));
    for (&id, (outcome, fitted)) in spec.models.iter().zip(fits) {
        if let Some(f) = fitted {
            scatter.push((id, f.train_pred, f.test_pred));
            if id == ModelId::RandomForest {
                forest = Some(f.model);
            }
        }
        rows.push(ResultsRow {
            label: id.label().to_string(),
            outcome,
        });
    }
    let cv = if spec.cv_folds >= 2 {
        let seed = derive_seed(spec.seed, stream::CV);
        par_map(&spec.models, |&id| {
            (
                id,
                k_fold_cv(&spec.model_spec(id), &d.x_train, &d.y_train, spec.cv_folds, seed),
            )
        })
    } else {
        Vec::new()
    };
    let importance = random_forest_importance(spec, &prepared, forest.as_ref());
    let split_study = if spec.split_fractions.len() > 1 {
        let first = rows.iter().map(|r| r.outcome.clone()).collect();
        Some(study_rows(spec, table, target, Some(first))?)
    } else {
        None
    };
    let results = ResultsTable {
        target: target.to_string(),
        metadata: metadata(spec, &prepared, &rows),
        rows,
    };
    Ok(TargetReport {
        results,
        prepared,
        cv,
        importance,
        split_study,
        scatter,
    })
}

/// Full pipeline for every target, plus the sweeps listed in
/// `sweeps.include_in_run`. Model failures land in their rows; data and
/// configuration problems abort the run.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput, Error> {
    spec.validate()?;
    let table = load_table(spec)?;
    let targets = spec
        .targets
        .iter()
        .map(|t| run_target(spec, &table, t))
        .collect::<Result<Vec<_>, _>>()?;
    let data: Vec<TargetData> = targets.iter().map(|t| t.prepared.data.clone()).collect();
    let sweeps = spec
        .sweeps
        .include_in_run
        .iter()
        .map(|&k| (k, run_sweep(spec, k, &data)))
        .collect();
    Ok(ExperimentOutput { targets, sweeps })
}

fn run_sweep(spec: &ExperimentSpec, kind: SweepKind, data: &[TargetData]) -> SweepResult {
    let h = &spec.hyperparameters;
    let sw = &spec.sweeps;
    match kind {
        SweepKind::Knn => sweep_knn_k(data, &sw.knn_k, &h.knn),
        SweepKind::Svr => sweep_svr_kernel(data, &sw.svr_kernels, &h.svr),
        SweepKind::Rf => {
            let mut base = h.random_forest.clone();
            let model_seed = derive_seed(spec.seed, stream::MODELS);
            base.seed = derive_seed(model_seed, ModelId::RandomForest.seed_stream());
            sweep_rf_trees(data, &sw.rf_trees, &base)
        }
    }
}

fn prepared_all(spec: &ExperimentSpec, select: bool) -> Result<Vec<PreparedTarget>, Error> {
    spec.validate()?;
    let table = load_table(spec)?;
    spec.targets
        .iter()
        .map(|t| prepare(spec, &table, t, spec.split_fractions[0], select))
        .collect()
}

/// `sweep_<kind>.tsv` over every configured target.
pub fn sweep_artifacts(spec: &ExperimentSpec, kind: SweepKind) -> Result<Vec<Artifact>, Error> {
    let data: Vec<TargetData> = prepared_all(spec, spec.feature_selection.enabled)?
        .into_iter()
        .map(|p| p.data)
        .collect();
    let s = run_sweep(spec, kind, &data);
    Ok(vec![Artifact::new(format!("sweep_{}.tsv", kind.name()), s.to_tsv())])
}

/// `selection_<target>.tsv` per target; runs elimination even when the
/// config leaves it disabled for `run`.
pub fn selection_artifacts(spec: &ExperimentSpec) -> Result<Vec<Artifact>, Error> {
    Ok(prepared_all(spec, true)?
        .iter()
        .map(|p| selection_artifact(&p.data.target, p.selection.as_ref().expect("selection ran")))
        .collect())
}

/// `importance_<target>.tsv` per target from the configured random forest.
pub fn importance_artifacts(spec: &ExperimentSpec) -> Result<Vec<Artifact>, Error> {
    Ok(prepared_all(spec, spec.feature_selection.enabled)?
        .iter()
        .map(|p| importance_artifact(&p.data.target, &random_forest_importance(spec, p, None)))
        .collect())
}
