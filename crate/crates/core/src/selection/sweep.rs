//! One-axis hyperparameter sweeps scored on fixed train/test splits.
//!
//! TSV layout (one row per axis point and target, axis points in sweep
//! order, targets in declared order):
//!
//! `<axis>\ttarget\ttrain_r2\ttrain_rmse\ttrain_mae\ttest_r2\ttest_rmse\ttest_mae`

use crate::experiment::report::{failure_marker, format_sig6, r2_cell};
use crate::metrics::SplitScore;
use crate::models::{Kernel, KnnParams, ModelError, ModelSpec, SvrParams};
use crate::tree::ForestParams;
use crate::Matrix;

/// Prepared train/test matrices for one target.
#[derive(Debug, Clone)]
pub struct TargetData {
    pub target: String,
    pub x_train: Matrix,
    pub y_train: Vec<f64>,
    pub x_test: Matrix,
    pub y_test: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum SweepCell {
    Scored { train: SplitScore, test: SplitScore },
    Failed(ModelError),
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub label: String,
    pub target: String,
    pub cell: SweepCell,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: String,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "{}\ttarget\ttrain_r2\ttrain_rmse\ttrain_mae\ttest_r2\ttest_rmse\ttest_mae\n",
            self.axis
        );
        for p in &self.points {
            let cells: Vec<String> = match &p.cell {
                SweepCell::Scored { train, test } => vec![
                    r2_cell(&train.r2),
                    format_sig6(train.rmse),
                    format_sig6(train.mae),
                    r2_cell(&test.r2),
                    format_sig6(test.rmse),
                    format_sig6(test.mae),
                ],
                SweepCell::Failed(e) => vec![failure_marker(e.tag()); 6],
            };
            out.push_str(&format!("{}\t{}\t{}\n", p.label, p.target, cells.join("\t")));
        }
        out
    }
}

fn score(spec: &ModelSpec, t: &TargetData) -> SweepCell {
    let run = || -> Result<SweepCell, ModelError> {
        let m = spec.fit(&t.x_train, &t.y_train)?;
        let train = SplitScore::compute(&m.predict(&t.x_train)?, &t.y_train)?;
        let test = SplitScore::compute(&m.predict(&t.x_test)?, &t.y_test)?;
        Ok(SweepCell::Scored { train, test })
    };
    run().unwrap_or_else(SweepCell::Failed)
}

fn sweep(axis: &str, points: Vec<(String, ModelSpec)>, targets: &[TargetData]) -> SweepResult {
    let mut out = Vec::with_capacity(points.len() * targets.len());
    for (label, spec) in &points {
        for t in targets {
            out.push(SweepPoint {
                label: label.clone(),
                target: t.target.clone(),
                cell: score(spec, t),
            });
        }
    }
    SweepResult {
        axis: axis.to_string(),
        points: out,
    }
}

fn sorted_unique(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// kNN over neighbour counts `ks` (sorted, deduplicated).
pub fn sweep_knn_k(targets: &[TargetData], ks: &[usize], base: &KnnParams) -> SweepResult {
    let points = sorted_unique(ks)
        .into_iter()
        .map(|k| (k.to_string(), ModelSpec::Knn(KnnParams { k, ..base.clone() })))
        .collect();
    sweep("k", points, targets)
}

/// SVR over kernels, in the given order; repeated kernel names are dropped.
pub fn sweep_svr_kernel(targets: &[TargetData], kernels: &[Kernel], base: &SvrParams) -> SweepResult {
    let mut seen = Vec::new();
    let points = kernels
        .iter()
        .filter(|k| {
            let fresh = !seen.contains(&k.name());
            seen.push(k.name());
            fresh
        })
        .map(|&kernel| {
            (
                kernel.name().to_string(),
                ModelSpec::Svr(SvrParams {
                    kernel,
                    ..base.clone()
                }),
            )
        })
        .collect();
    sweep("kernel", points, targets)
}

/// Random forest over tree counts (sorted, deduplicated).
pub fn sweep_rf_trees(targets: &[TargetData], counts: &[usize], base: &ForestParams) -> SweepResult {
    let points = sorted_unique(counts)
        .into_iter()
        .map(|n_trees| {
            (
                n_trees.to_string(),
                ModelSpec::Forest(ForestParams {
                    n_trees,
                    ..base.clone()
                }),
            )
        })
        .collect();
    sweep("n_trees", points, targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target() -> TargetData {
        let rows: Vec<[f64; 2]> = (0..30).map(|i| [i as f64, ((i * 7) % 5) as f64]).collect();
        let y: Vec<f64> = rows.iter().map(|r| r[0] * 0.5 + r[1]).collect();
        let x = Matrix::from_rows(&rows);
        let tr: Vec<usize> = (0..24).collect();
        let te: Vec<usize> = (24..30).collect();
        TargetData {
            target: "T".into(),
            x_train: x.select_rows(&tr),
            y_train: y[..24].to_vec(),
            x_test: x.select_rows(&te),
            y_test: y[24..].to_vec(),
        }
    }

    #[test]
    fn knn_single_and_self_neighbor() {
        let r = sweep_knn_k(&[target()], &[1], &KnnParams::default());
        assert_eq!(r.points.len(), 1);
        match &r.points[0].cell {
            SweepCell::Scored { train, .. } => assert_eq!(train.r2, Ok(1.0)),
            other => panic!("{other:?}"),
        }
        let r = sweep_knn_k(&[target(), target()], &[3, 1, 3], &KnnParams::default());
        let labels: Vec<&str> = r.points.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["1", "1", "3", "3"]);
        let tsv = r.to_tsv();
        assert!(tsv.starts_with("k\ttarget\ttrain_r2\ttrain_rmse\ttrain_mae\ttest_r2\ttest_rmse\ttest_mae\n"));
        assert_eq!(tsv.lines().count(), 5);
    }

    #[test]
    fn failures_are_marked() {
        let r = sweep_knn_k(&[target()], &[100], &KnnParams::default());
        assert!(r.to_tsv().contains("FAILED(InvalidK)"));
    }

    #[test]
    fn one_tree_forest_and_kernels() {
        let r = sweep_rf_trees(&[target()], &[1], &ForestParams::default());
        assert_eq!(r.points.len(), 1);
        let ks = [Kernel::from_name("rbf").unwrap(), Kernel::from_name("rbf").unwrap()];
        let r = sweep_svr_kernel(&[target()], &ks, &SvrParams::default());
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.to_tsv(), sweep_svr_kernel(&[target()], &ks, &SvrParams::default()).to_tsv());
    }
}
