//! Dataset ingestion, synthetic generation, standardization and splitting.

mod schema;
mod split;
mod standardize;
pub mod synth;
mod table;

pub use schema::{ColumnKind, FeatureSchema, CROP_ROTATION_LEVELS};
pub use split::{split_indices, train_test_split, SplitSpec};
pub use standardize::{ColumnStats, Standardizer};
pub use synth::synth_generate;
pub use table::{load_csv, read_csv, write_csv, DataTable};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("non-numeric cell at data row {row}, column `{column}`: {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("file has no data rows")]
    EmptyFile,
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
}
