//! Brute-force k-nearest-neighbour regression.
//!
//! Neighbours are ordered by `(distance, training index)`, so equal
//! distances resolve to the lower row index. The prediction is the
//! unweighted mean of the k nearest targets, summed in that order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{check_training, ModelError};
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistanceMetric {
    Euclidean,
    Manhattan,
    Minkowski {
        #[serde(default = "default_minkowski_p")]
        p: f64,
    },
}

fn default_minkowski_p() -> f64 {
    3.0
}

impl DistanceMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            DistanceMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            DistanceMetric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            DistanceMetric::Minkowski { p } => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnParams {
    pub k: usize,
    pub metric: DistanceMetric,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self {
            k: 5,
            metric: DistanceMetric::Euclidean,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KnnModel {
    x: Matrix,
    y: Vec<f64>,
    params: KnnParams,
}

pub fn knn_fit(x: &Matrix, y: &[f64], params: &KnnParams) -> Result<KnnModel, ModelError> {
    check_training(x, y)?;
    if params.k == 0 {
        return Err(ModelError::InvalidParams("k must be at least 1".into()));
    }
    if params.k > y.len() {
        return Err(ModelError::InvalidK {
            k: params.k,
            n: y.len(),
        });
    }
    if let DistanceMetric::Minkowski { p } = params.metric {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(ModelError::InvalidParams(format!(
                "minkowski exponent must be finite and >= 1, got {p}"
            )));
        }
    }
    Ok(KnnModel {
        x: x.clone(),
        y: y.to_vec(),
        params: params.clone(),
    })
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl KnnModel {
    pub fn feature_count(&self) -> usize {
        self.x.ncols()
    }

    pub fn params(&self) -> &KnnParams {
        &self.params
    }

    /// Indices of the k nearest training rows, nearest first.
    pub fn neighbors(&self, q: &[f64]) -> Vec<usize> {
        let mut buf = Vec::with_capacity(self.y.len());
        self.neighbors_into(q, &mut buf);
        buf.iter().map(|&(_, i)| i).collect()
    }

    fn neighbors_into(&self, q: &[f64], buf: &mut Vec<(f64, usize)>) {
        buf.clear();
        buf.extend(
            self.x
                .rows_iter()
                .enumerate()
                .map(|(i, r)| (self.params.metric.distance(r, q), i)),
        );
        let k = self.params.k;
        if k < buf.len() {
            buf.select_nth_unstable_by(k - 1, by_distance_then_index);
            buf.truncate(k);
        }
        buf.sort_unstable_by(by_distance_then_index);
    }

    pub fn predict_row(&self, q: &[f64]) -> f64 {
        let mut buf = Vec::with_capacity(self.y.len());
        self.predict_with(q, &mut buf)
    }

    fn predict_with(&self, q: &[f64], buf: &mut Vec<(f64, usize)>) -> f64 {
        self.neighbors_into(q, buf);
        buf.iter().map(|&(_, i)| self.y[i]).sum::<f64>() / buf.len() as f64
    }

    pub(crate) fn predict_matrix(&self, x: &Matrix) -> Vec<f64> {
        let mut buf = Vec::with_capacity(self.y.len());
        x.rows_iter().map(|r| self.predict_with(r, &mut buf)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn data() -> (Matrix, Vec<f64>) {
        let rows: Vec<[f64; 2]> = (0..12)
            .map(|i| [(i * 7 % 11) as f64, (i * 3 % 5) as f64])
            .collect();
        let y = (0..12).map(|i| i as f64 * 1.5).collect();
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn k1_identity_and_k_n_mean() {
        let (x, y) = data();
        let m = knn_fit(&x, &y, &KnnParams { k: 1, ..Default::default() }).unwrap();
        for i in 0..x.nrows() {
            assert_eq!(m.predict_row(x.row(i)), y[i]);
        }
        let m = knn_fit(&x, &y, &KnnParams { k: 12, ..Default::default() }).unwrap();
        let mean = y.iter().sum::<f64>() / 12.0;
        assert!((m.predict_row(&[100.0, -3.0]) - mean).abs() < 1e-12);
    }

    #[test]
    fn k_too_large() {
        let (x, y) = data();
        assert!(matches!(
            knn_fit(&x, &y, &KnnParams { k: 13, ..Default::default() }),
            Err(ModelError::InvalidK { k: 13, n: 12 })
        ));
    }

    #[test]
    fn ties_prefer_lower_index() {
        let x = Matrix::from_rows(&[[1.0], [-1.0], [1.0]]);
        let m = knn_fit(&x, &[10.0, 20.0, 30.0], &KnnParams { k: 1, ..Default::default() }).unwrap();
        assert_eq!(m.predict_row(&[0.0]), 10.0);
        assert_eq!(m.neighbors(&[0.0]), vec![0]);
        let m = knn_fit(&x, &[10.0, 20.0, 30.0], &KnnParams { k: 2, ..Default::default() }).unwrap();
        assert_eq!(m.neighbors(&[0.0]), vec![0, 1]);
    }

    #[test]
    fn metrics_hand_values() {
        let (a, b) = ([0.0, 0.0], [3.0, 4.0]);
        assert_eq!(DistanceMetric::Euclidean.distance(&a, &b), 5.0);
        assert_eq!(DistanceMetric::Manhattan.distance(&a, &b), 7.0);
        let d = DistanceMetric::Minkowski { p: 3.0 }.distance(&a, &b);
        assert!((d - 91f64.cbrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn permutation_invariant_without_ties(
            pts in prop::collection::vec((-100i32..100, -100i32..100), 6..20),
            q in (-100i32..100, -100i32..100),
            shift in 1usize..5,
        ) {
            let rows: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a as f64 + 0.001 * b as f64, b as f64]).collect();
            let y: Vec<f64> = (0..rows.len()).map(|i| i as f64).collect();
            let q = [q.0 as f64 + 0.5e-4, q.1 as f64 + 0.25e-4];
            let params = KnnParams { k: 3, ..Default::default() };
            let m = knn_fit(&Matrix::from_rows(&rows), &y, &params).unwrap();
            let mut d: Vec<f64> = rows.iter().map(|r| DistanceMetric::Euclidean.distance(r, &q)).collect();
            d.sort_by(f64::total_cmp);
            prop_assume!(d.windows(2).all(|w| w[0] != w[1]));
            let n = rows.len();
            let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
            let prow: Vec<[f64; 2]> = perm.iter().map(|&i| rows[i]).collect();
            let py: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
            let pm = knn_fit(&Matrix::from_rows(&prow), &py, &params).unwrap();
            prop_assert!((m.predict_row(&q) - pm.predict_row(&q)).abs() < 1e-12);
        }
    }
}
