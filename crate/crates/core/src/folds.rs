//! Seeded k-fold partitioning shared by cross-validation, backward
//! elimination and stacking.

use rand::seq::SliceRandom;

use crate::models::ModelError;
use crate::rng::seeded;

/// Splits `0..n` into `k` disjoint folds after a seeded shuffle.
///
/// The first `n % k` folds receive one extra row. Indices inside each fold
/// are sorted ascending.
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, ModelError> {
    if k < 2 || k > n {
        return Err(ModelError::InvalidFolds { folds: k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded(seed));
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let mut fold = order[start..start + len].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += len;
    }
    Ok(folds)
}

/// Complement of `fold` within `0..n`, ascending.
pub fn complement(n: usize, fold: &[usize]) -> Vec<usize> {
    let mut held = vec![false; n];
    for &i in fold {
        held[i] = true;
    }
    (0..n).filter(|&i| !held[i]).collect()
}
