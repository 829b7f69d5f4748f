//! Table rendering for markdown and CSV reports.
//!
//! Both formats carry the same cells: every number goes through
//! [`format_sig6`] and every failure through [`failure_marker`].

use crate::metrics::{MetricsError, SplitScore};
use crate::models::ModelError;

/// Metric columns in report order.
pub const METRIC_COLUMNS: [&str; 6] = [
    "train_r2",
    "train_rmse",
    "train_mae",
    "test_r2",
    "test_rmse",
    "test_mae",
];

const MARKDOWN_HEADERS: [&str; 7] = [
    "Model",
    "Train R²",
    "Train RMSE",
    "Train MAE",
    "Test R²",
    "Test RMSE",
    "Test MAE",
];

/// Six significant digits: fixed notation when the rounded exponent lies in
/// `[-4, 6)`, otherwise scientific with five decimals.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0.00000".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("rust exponent format");
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, v)
    } else {
        sci
    }
}

pub fn failure_marker(tag: &str) -> String {
    format!("FAILED({tag})")
}

pub fn metrics_tag(e: &MetricsError) -> &'static str {
    match e {
        MetricsError::ConstantVector => "ConstantVector",
        MetricsError::LengthMismatch { .. } => "LengthMismatch",
        MetricsError::Empty => "Empty",
    }
}

/// A correlation-based cell: the value, or a marker when undefined.
pub fn r2_cell(r: &Result<f64, MetricsError>) -> String {
    match r {
        Ok(v) => format_sig6(*v),
        Err(e) => failure_marker(metrics_tag(e)),
    }
}

/// Result of fitting and scoring one model on one split.
#[derive(Debug, Clone)]
pub enum ModelOutcome {
    Scored { train: SplitScore, test: SplitScore },
    Failed(ModelError),
}

impl ModelOutcome {
    /// The six metric cells in [`METRIC_COLUMNS`] order.
    pub fn cells(&self) -> Vec<String> {
        match self {
            ModelOutcome::Scored { train, test } => vec![
                r2_cell(&train.r2),
                format_sig6(train.rmse),
                format_sig6(train.mae),
                r2_cell(&test.r2),
                format_sig6(test.rmse),
                format_sig6(test.mae),
            ],
            ModelOutcome::Failed(e) => vec![failure_marker(e.tag()); 6],
        }
    }

    pub fn scores(&self) -> Option<(&SplitScore, &SplitScore)> {
        match self {
            ModelOutcome::Scored { train, test } => Some((train, test)),
            ModelOutcome::Failed(_) => None,
        }
    }

    /// Train and test R² cells.
    fn r2_cells(&self) -> [String; 2] {
        match self {
            ModelOutcome::Scored { train, test } => [r2_cell(&train.r2), r2_cell(&test.r2)],
            ModelOutcome::Failed(e) => [failure_marker(e.tag()), failure_marker(e.tag())],
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResultsRow {
    pub label: String,
    pub outcome: ModelOutcome,
}

/// Per-target results: one row per requested model plus a metadata footer.
#[derive(Debug, Clone)]
pub struct ResultsTable {
    pub target: String,
    pub rows: Vec<ResultsRow>,
    pub metadata: Vec<(String, String)>,
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn markdown_row(fields: &[String]) -> String {
    format!("| {} |\n", fields.join(" | "))
}

impl ResultsTable {
    pub fn row(&self, label: &str) -> Option<&ResultsRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Auxiliary fit statistics per scored model: Pearson r and 1 - SSE/SST.
    fn auxiliary_lines(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for r in &self.rows {
            if let Some((tr, te)) = r.outcome.scores() {
                out.push((
                    format!("pearson_r {}", r.label),
                    format!("train {}, test {}", r2_cell(&tr.r), r2_cell(&te.r)),
                ));
                out.push((
                    format!("cod {}", r.label),
                    format!("train {}, test {}", r2_cell(&tr.cod), r2_cell(&te.cod)),
                ));
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# Results: {}\n\n", self.target);
        out += &markdown_row(&MARKDOWN_HEADERS.map(String::from));
        out += &format!("|---{}|\n", "|---:".repeat(6));
        for r in &self.rows {
            let mut fields = vec![r.label.clone()];
            fields.extend(r.outcome.cells());
            out += &markdown_row(&fields);
        }
        out += "\n## Metadata\n\n";
        for (k, v) in self.metadata.iter().chain(&self.auxiliary_lines()) {
            out += &format!("- {k}: {v}\n");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut header = vec!["model".to_string()];
        header.extend(METRIC_COLUMNS.map(String::from));
        let mut out = csv_line(&header);
        for r in &self.rows {
            let mut fields = vec![r.label.clone()];
            fields.extend(r.outcome.cells());
            out += &csv_line(&fields);
        }
        for (k, v) in self.metadata.iter().chain(&self.auxiliary_lines()) {
            out += &format!("# {k}: {v}\n");
        }
        out
    }
}

/// Train/test R² per (model, split fraction), rows ordered model-major.
#[derive(Debug, Clone)]
pub struct SplitStudy {
    pub target: String,
    pub fractions: Vec<f64>,
    /// `(label, outcome per fraction)`.
    pub rows: Vec<(String, Vec<ModelOutcome>)>,
}

impl SplitStudy {
    fn records(&self) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        for (label, cells) in &self.rows {
            for (f, o) in self.fractions.iter().zip(cells) {
                let [tr, te] = o.r2_cells();
                out.push(vec![label.clone(), format!("{f}"), tr, te]);
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# Split study: {}\n\n", self.target);
        out += "| Model | Train fraction | Train R² | Test R² |\n|---|---:|---:|---:|\n";
        for rec in self.records() {
            out += &markdown_row(&rec);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let header = ["model", "train_fraction", "train_r2", "test_r2"].map(String::from);
        let mut out = csv_line(&header);
        for rec in self.records() {
            out += &csv_line(&rec);
        }
        out
    }
}
