use super::{DataError, DataTable};
use crate::Matrix;

/// Per-column mean and population standard deviation of a matrix.
///
/// Constant columns get the sentinel std 1, so they standardize to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl ColumnStats {
    pub fn fit(x: &Matrix) -> Result<Self, DataError> {
        let n = x.nrows();
        if n == 0 {
            return Err(DataError::InvalidSize("cannot standardize zero rows".into()));
        }
        let p = x.ncols();
        let mut means = vec![0.0; p];
        let mut stds = vec![0.0; p];
        for j in 0..p {
            let col = x.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let (lo, hi) = col
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
            means[j] = if lo == hi { lo } else { mean };
            stds[j] = if lo == hi {
                1.0
            } else {
                (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt()
            };
        }
        Ok(Self { means, stds })
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix, DataError> {
        self.check(x)?;
        let mut out = x.clone();
        for i in 0..out.nrows() {
            for (j, v) in out.row_mut(i).iter_mut().enumerate() {
                *v = (*v - self.means[j]) / self.stds[j];
            }
        }
        Ok(out)
    }

    pub fn invert(&self, z: &Matrix) -> Result<Matrix, DataError> {
        self.check(z)?;
        let mut out = z.clone();
        for i in 0..out.nrows() {
            for (j, v) in out.row_mut(i).iter_mut().enumerate() {
                *v = *v * self.stds[j] + self.means[j];
            }
        }
        Ok(out)
    }

    fn check(&self, x: &Matrix) -> Result<(), DataError> {
        if x.ncols() != self.means.len() {
            return Err(DataError::SchemaMismatch(format!(
                "standardizer has {} columns, input has {}",
                self.means.len(),
                x.ncols()
            )));
        }
        Ok(())
    }
}

/// Column statistics bound to named table columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub columns: Vec<String>,
    pub stats: ColumnStats,
}

impl Standardizer {
    pub fn fit(table: &DataTable, columns: &[&str]) -> Result<Self, DataError> {
        let x = table.matrix_of(columns)?;
        Ok(Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            stats: ColumnStats::fit(&x)?,
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.stats.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stats.stds
    }

    /// Standardizes the fitted columns; other columns pass through.
    pub fn apply(&self, table: &DataTable) -> Result<DataTable, DataError> {
        self.map(table, |v, m, s| (v - m) / s)
    }

    pub fn invert(&self, table: &DataTable) -> Result<DataTable, DataError> {
        self.map(table, |v, m, s| v * s + m)
    }

    fn map(&self, table: &DataTable, f: impl Fn(f64, f64, f64) -> f64) -> Result<DataTable, DataError> {
        let idx = self
            .columns
            .iter()
            .map(|c| {
                table
                    .schema()
                    .index_of(c)
                    .ok_or_else(|| DataError::SchemaMismatch(format!("column `{c}` not in table")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut values = table.values().clone();
        for i in 0..values.nrows() {
            let row = values.row_mut(i);
            for (k, &j) in idx.iter().enumerate() {
                row[j] = f(row[j], self.stats.means[k], self.stats.stds[k]);
            }
        }
        Ok(table.with_values(values))
    }
}
