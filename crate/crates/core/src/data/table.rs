use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{ColumnKind, DataError, FeatureSchema};
use crate::Matrix;

/// Named numeric columns; categorical columns hold their integer codes.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    schema: FeatureSchema,
    values: Matrix,
}

impl DataTable {
    /// Wraps a matrix whose columns follow `schema` order.
    pub fn new(schema: FeatureSchema, values: Matrix) -> Result<Self, DataError> {
        if values.ncols() != schema.len() {
            return Err(DataError::SchemaMismatch(format!(
                "schema has {} columns, matrix has {}",
                schema.len(),
                values.ncols()
            )));
        }
        for (i, row) in values.rows_iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DataError::NonNumericCell {
                        row: i + 1,
                        column: schema.names()[j].clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        Ok(Self { schema, values })
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    /// Categorical encoding of `name`: label for each integer code.
    pub fn encoding(&self, name: &str) -> Option<&[String]> {
        let j = self.schema.index_of(name)?;
        match &self.schema.kinds()[j] {
            ColumnKind::Categorical { levels } => Some(levels),
            ColumnKind::Continuous => None,
        }
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, DataError> {
        let j = self.column_index(name)?;
        Ok(self.values.column(j))
    }

    pub fn column_index(&self, name: &str) -> Result<usize, DataError> {
        self.schema
            .index_of(name)
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))
    }

    /// Design matrix of the named columns, in the given order.
    pub fn matrix_of(&self, names: &[&str]) -> Result<Matrix, DataError> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.values.select_columns(&idx))
    }

    /// Subset of rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> DataTable {
        DataTable {
            schema: self.schema.clone(),
            values: self.values.select_rows(idx),
        }
    }

    /// Same schema with replaced values; used by standardization.
    pub(crate) fn with_values(&self, values: Matrix) -> DataTable {
        debug_assert_eq!(values.ncols(), self.schema.len());
        DataTable {
            schema: self.schema.clone(),
            values,
        }
    }
}

/// Reads a CSV file whose header contains exactly the schema's columns in
/// any order.
pub fn load_csv(path: impl AsRef<Path>, schema: &FeatureSchema) -> Result<DataTable, DataError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, schema)
}

/// Parses CSV from any reader; see [`load_csv`].
///
/// Categorical cells may hold either the level label or its integer code.
pub fn read_csv<R: Read>(reader: R, schema: &FeatureSchema) -> Result<DataTable, DataError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(DataError::EmptyFile);
    }
    let header: Vec<&str> = headers.iter().map(str::trim).collect();
    for h in &header {
        if schema.index_of(h).is_none() {
            return Err(DataError::SchemaMismatch(format!("unexpected column `{h}`")));
        }
    }
    // Position in the file of each schema column.
    let positions = schema
        .names()
        .iter()
        .map(|n| {
            header
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| DataError::MissingColumn(n.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let p = schema.len();
    let mut data = Vec::new();
    let mut n = 0;
    for record in rdr.records() {
        let record = record?;
        n += 1;
        for (j, &pos) in positions.iter().enumerate() {
            let raw = record.get(pos).unwrap_or("").trim();
            data.push(parse_cell(raw, &schema.kinds()[j]).ok_or_else(|| {
                DataError::NonNumericCell {
                    row: n,
                    column: schema.names()[j].clone(),
                    value: raw.to_string(),
                }
            })?);
        }
    }
    if n == 0 {
        return Err(DataError::EmptyFile);
    }
    DataTable::new(schema.clone(), Matrix::from_vec(n, p, data))
}

fn parse_cell(raw: &str, kind: &ColumnKind) -> Option<f64> {
    match kind {
        ColumnKind::Continuous => raw.parse::<f64>().ok().filter(|v| v.is_finite()),
        ColumnKind::Categorical { levels } => {
            if let Some(code) = levels.iter().position(|l| l == raw) {
                return Some(code as f64);
            }
            let code: usize = raw.parse().ok()?;
            (code < levels.len()).then_some(code as f64)
        }
    }
}

/// Writes the table as CSV in schema column order.
///
/// Continuous values use the shortest round-trip representation, so
/// [`read_csv`] recovers them bit for bit. Categorical cells are written as
/// labels.
pub fn write_csv<W: Write>(table: &DataTable, writer: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(table.schema.names())?;
    let kinds = table.schema.kinds();
    let mut record = Vec::with_capacity(table.p());
    for row in table.values.rows_iter() {
        record.clear();
        for (v, kind) in row.iter().zip(kinds) {
            record.push(match kind {
                ColumnKind::Continuous => v.to_string(),
                ColumnKind::Categorical { levels } => levels[*v as usize].clone(),
            });
        }
        w.write_record(&record)?;
    }
    w.flush().map_err(|source| DataError::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}
