use rand::seq::SliceRandom;

use super::{DataError, DataTable};
use crate::rng::seeded;

/// Train fraction in `(0, 1]` plus the shuffle seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    /// `floor(train_fraction · n)`, guarded against products such as
    /// `0.29 · 100 = 28.999…`.
    pub fn train_size(&self, n: usize) -> usize {
        ((self.train_fraction * n as f64) + 1e-9).floor() as usize
    }
}

/// Seeded shuffle of `0..n`, then a prefix split into (train, test).
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    let f = spec.train_fraction;
    if !(f > 0.0 && f <= 1.0) {
        return Err(DataError::DegenerateSplit(format!(
            "train fraction {f} outside (0, 1]"
        )));
    }
    let n_train = spec.train_size(n).min(n);
    if n_train == 0 {
        return Err(DataError::DegenerateSplit(format!(
            "fraction {f} of {n} rows leaves no training rows"
        )));
    }
    if f < 1.0 && n_train == n {
        return Err(DataError::DegenerateSplit(format!(
            "fraction {f} of {n} rows leaves no test rows"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded(spec.seed));
    let test = order.split_off(n_train);
    Ok((order, test))
}

pub fn train_test_split(
    table: &DataTable,
    spec: &SplitSpec,
) -> Result<(DataTable, DataTable), DataError> {
    let (train, test) = split_indices(table.n(), spec)?;
    Ok((table.select_rows(&train), table.select_rows(&test)))
}
