//! CART regression tree.
//!
//! At each node every candidate feature is scanned in ascending index
//! order. Candidate thresholds are midpoints of consecutive distinct sorted
//! values, scanned ascending. A candidate replaces the incumbent only when
//! its children's total SSR is lower by more than a relative `1e-12`, so
//! exact ties keep the lower feature index, then the lower threshold.
//!
//! Each feature keeps its node samples presorted; after a split the sorted
//! lists are partitioned stably, so no node re-sorts.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::models::{check_training, ModelError};
use crate::Matrix;

const TIE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeParams {
    /// `None` grows until the other stopping rules apply.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
        }
    }
}

impl TreeParams {
    pub(crate) fn validate(&self) -> Result<(), ModelError> {
        if self.min_samples_split < 2 {
            return Err(ModelError::InvalidParams("min_samples_split must be >= 2".into()));
        }
        if self.min_samples_leaf < 1 {
            return Err(ModelError::InvalidParams("min_samples_leaf must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        value: f64,
        samples: usize,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        samples: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    nodes: Vec<Node>,
    feature_count: usize,
    /// Total SSR decrease attributed to each feature.
    ssr_decrease: Vec<f64>,
}

impl TreeModel {
    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    /// Nodes in preorder; index 0 is the root.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn ssr_decrease(&self) -> &[f64] {
        &self.ssr_decrease
    }

    /// `(feature, threshold)` of the root, if it split.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[0] {
            Node::Split { feature, threshold, .. } => Some((feature, threshold)),
            Node::Leaf { .. } => None,
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value, .. } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }
}

pub fn tree_fit(x: &Matrix, y: &[f64], params: &TreeParams) -> Result<TreeModel, ModelError> {
    check_training(x, y)?;
    params.validate()?;
    let rows: Vec<usize> = (0..y.len()).collect();
    Ok(build_tree(x, y, &rows, params, None))
}

/// Random feature subsetting for forests.
pub(crate) struct FeatureSampler<'r> {
    pub max_features: usize,
    pub rng: &'r mut ChaCha8Rng,
}

/// Grows a tree on the (possibly repeated) training rows `rows`.
pub(crate) fn build_tree(
    x: &Matrix,
    y: &[f64],
    rows: &[usize],
    params: &TreeParams,
    sampler: Option<FeatureSampler<'_>>,
) -> TreeModel {
    let p = x.ncols();
    let m = rows.len();
    let xs: Vec<Vec<f64>> = (0..p)
        .map(|f| rows.iter().map(|&r| x.get(r, f)).collect())
        .collect();
    let ys: Vec<f64> = rows.iter().map(|&r| y[r]).collect();
    let sorted: Vec<Vec<u32>> = xs
        .iter()
        .map(|col| {
            let mut idx: Vec<u32> = (0..m as u32).collect();
            idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]).then(a.cmp(&b)));
            idx
        })
        .collect();
    let mut b = Builder {
        xs,
        ys,
        sorted,
        params,
        sampler,
        nodes: Vec::new(),
        ssr_decrease: vec![0.0; p],
        goes_left: vec![false; m],
        buf: Vec::with_capacity(m),
        feature_order: (0..p).collect(),
    };
    b.grow(0, m, 0);
    TreeModel {
        nodes: b.nodes,
        feature_count: p,
        ssr_decrease: b.ssr_decrease,
    }
}

struct Builder<'a, 'r> {
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
    sorted: Vec<Vec<u32>>,
    params: &'a TreeParams,
    sampler: Option<FeatureSampler<'r>>,
    nodes: Vec<Node>,
    ssr_decrease: Vec<f64>,
    goes_left: Vec<bool>,
    buf: Vec<u32>,
    feature_order: Vec<usize>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    /// Position in the feature's sorted range where the right child starts.
    cut: usize,
    ssr: f64,
    ssr_left: f64,
    ssr_right: f64,
}

impl Builder<'_, '_> {
    fn grow(&mut self, start: usize, end: usize, depth: usize) -> usize {
        let m = end - start;
        let id = self.nodes.len();
        // Placeholder; replaced once children are known.
        self.nodes.push(Node::Leaf { value: 0.0, samples: m });

        let members = &self.sorted[0][start..end];
        let first = self.ys[members[0] as usize];
        let all_equal = members.iter().all(|&i| self.ys[i as usize] == first);
        let value = if all_equal {
            first
        } else {
            members.iter().map(|&i| self.ys[i as usize]).sum::<f64>() / m as f64
        };
        let depth_ok = self.params.max_depth.is_none_or(|d| depth < d);
        let size_ok = m >= self.params.min_samples_split && m >= 2 * self.params.min_samples_leaf;
        if all_equal || !depth_ok || !size_ok {
            self.nodes[id] = Node::Leaf { value, samples: m };
            return id;
        }
        let node_ssr: f64 = members
            .iter()
            .map(|&i| (self.ys[i as usize] - value).powi(2))
            .sum();
        let features = self.candidate_features(start, end);
        let Some(best) = self.best_split(&features, start, end, value, node_ssr) else {
            self.nodes[id] = Node::Leaf { value, samples: m };
            return id;
        };

        self.ssr_decrease[best.feature] += (node_ssr - best.ssr_left - best.ssr_right).max(0.0);
        let split_sorted = &self.sorted[best.feature][start..end];
        for (k, &i) in split_sorted.iter().enumerate() {
            self.goes_left[i as usize] = k < best.cut;
        }
        for f in 0..self.sorted.len() {
            self.buf.clear();
            let range = &mut self.sorted[f][start..end];
            self.buf.extend(range.iter().filter(|&&i| !self.goes_left[i as usize]));
            let mut w = 0;
            for k in 0..m {
                let i = range[k];
                if self.goes_left[i as usize] {
                    range[w] = i;
                    w += 1;
                }
            }
            range[w..].copy_from_slice(&self.buf);
        }
        let mid = start + best.cut;
        let left = self.grow(start, mid, depth + 1);
        let right = self.grow(mid, end, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
            samples: m,
        };
        id
    }

    /// Features to scan at this node, ascending.
    fn candidate_features(&mut self, start: usize, end: usize) -> Vec<usize> {
        let p = self.xs.len();
        let Some(s) = self.sampler.as_mut() else {
            return (0..p).collect();
        };
        if s.max_features >= p {
            return (0..p).collect();
        }
        self.feature_order.shuffle(s.rng);
        let mut chosen = Vec::with_capacity(s.max_features);
        for &f in &self.feature_order {
            let sorted = &self.sorted[f][start..end];
            let lo = self.xs[f][sorted[0] as usize];
            let hi = self.xs[f][sorted[sorted.len() - 1] as usize];
            if lo < hi {
                chosen.push(f);
                if chosen.len() == s.max_features {
                    break;
                }
            }
        }
        chosen.sort_unstable();
        chosen
    }

    fn best_split(
        &self,
        features: &[usize],
        start: usize,
        end: usize,
        mean: f64,
        node_ssr: f64,
    ) -> Option<Candidate> {
        let m = end - start;
        let leaf = self.params.min_samples_leaf;
        let tie = TIE_RTOL * node_ssr;
        let total_sum: f64 = self.sorted[0][start..end]
            .iter()
            .map(|&i| self.ys[i as usize] - mean)
            .sum();
        let mut best: Option<Candidate> = None;
        for &f in features {
            let col = &self.xs[f];
            let sorted = &self.sorted[f][start..end];
            let (mut sum_l, mut sq_l) = (0.0, 0.0);
            for k in 1..m {
                let prev = sorted[k - 1] as usize;
                let r = self.ys[prev] - mean;
                sum_l += r;
                sq_l += r * r;
                if k < leaf || m - k < leaf {
                    continue;
                }
                let (a, b) = (col[prev], col[sorted[k] as usize]);
                if a == b {
                    continue;
                }
                let (nl, nr) = (k as f64, (m - k) as f64);
                let ssr_left = (sq_l - sum_l * sum_l / nl).max(0.0);
                let sum_r = total_sum - sum_l;
                let ssr_right = (node_ssr - sq_l - sum_r * sum_r / nr).max(0.0);
                let ssr = ssr_left + ssr_right;
                if best.as_ref().is_none_or(|c| ssr < c.ssr - tie) {
                    let mut threshold = a + (b - a) / 2.0;
                    if threshold >= b || threshold < a {
                        threshold = a;
                    }
                    best = Some(Candidate {
                        feature: f,
                        threshold,
                        cut: k,
                        ssr,
                        ssr_left,
                        ssr_right,
                    });
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unlimited() -> TreeParams {
        TreeParams::default()
    }

    #[test]
    fn constant_target_single_leaf() {
        let x = Matrix::from_rows(&[[1.0], [2.0], [3.0]]);
        let t = tree_fit(&x, &[0.1, 0.1, 0.1], &unlimited()).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert_eq!(t.predict_row(&[99.0]), 0.1);
    }

    #[test]
    fn step_split_at_midpoint() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]);
        let p = TreeParams { max_depth: Some(1), ..Default::default() };
        let t = tree_fit(&x, &[0.0, 0.0, 10.0, 10.0], &p).unwrap();
        assert_eq!(t.root_split(), Some((0, 1.5)));
        assert_eq!(t.predict_row(&[1.0]), 0.0);
        assert_eq!(t.predict_row(&[2.0]), 10.0);
    }

    #[test]
    fn manual_trace_out_of_range() {
        // Root splits feature 0 at 1.0; left child splits feature 1 at 0.5.
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [2.0, 0.0], [3.0, 1.0]]);
        let t = tree_fit(&x, &[0.0, 4.0, 10.0, 10.0], &unlimited()).unwrap();
        assert_eq!(t.root_split(), Some((0, 1.0)));
        assert_eq!(t.nodes().len(), 5);
        assert_eq!(t.predict_row(&[-100.0, -100.0]), 0.0);
        assert_eq!(t.predict_row(&[-100.0, 100.0]), 4.0);
        assert_eq!(t.predict_row(&[100.0, -5.0]), 10.0);
    }

    #[test]
    fn ties_prefer_lower_feature_then_threshold() {
        // Both features separate y identically.
        let x = Matrix::from_rows(&[[0.0, 5.0], [1.0, 6.0], [2.0, 7.0], [3.0, 8.0]]);
        let p = TreeParams { max_depth: Some(1), ..Default::default() };
        let t = tree_fit(&x, &[1.0, 1.0, 2.0, 2.0], &p).unwrap();
        assert_eq!(t.root_split(), Some((0, 1.5)));
        // Symmetric y: thresholds 0.5 and 2.5 tie; lower wins.
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]);
        let t = tree_fit(&x, &[0.0, 1.0, 1.0, 0.0], &p).unwrap();
        assert_eq!(t.root_split(), Some((0, 0.5)));
    }

    #[test]
    fn interpolates_training_points() {
        let rows: Vec<[f64; 2]> = (0..40).map(|i| [(i * 13 % 40) as f64, (i % 3) as f64]).collect();
        let y: Vec<f64> = (0..40).map(|i| ((i * 7919) % 101) as f64 / 7.0).collect();
        let x = Matrix::from_rows(&rows);
        let t = tree_fit(&x, &y, &unlimited()).unwrap();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(t.predict_row(r), y[i]);
        }
    }

    #[test]
    fn leaves_respect_min_samples_leaf() {
        let rows: Vec<[f64; 1]> = (0..50).map(|i| [i as f64]).collect();
        let y: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64).collect();
        let p = TreeParams { min_samples_leaf: 4, ..Default::default() };
        let t = tree_fit(&Matrix::from_rows(&rows), &y, &p).unwrap();
        for n in t.nodes() {
            if let Node::Leaf { samples, .. } = n {
                assert!(*samples >= 4);
            }
        }
        let p = TreeParams { max_depth: Some(2), ..Default::default() };
        assert!(tree_fit(&Matrix::from_rows(&rows), &y, &p).unwrap().depth() <= 2);
    }

    #[test]
    fn adjacent_floats_threshold() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let x = Matrix::from_rows(&[[a], [b]]);
        let t = tree_fit(&x, &[0.0, 1.0], &unlimited()).unwrap();
        assert_eq!(t.predict_row(&[a]), 0.0);
        assert_eq!(t.predict_row(&[b]), 1.0);
    }

    #[test]
    fn invalid_params() {
        let x = Matrix::from_rows(&[[0.0]]);
        let p = TreeParams { min_samples_split: 1, ..Default::default() };
        assert!(tree_fit(&x, &[1.0], &p).is_err());
        let p = TreeParams { min_samples_leaf: 0, ..Default::default() };
        assert!(tree_fit(&x, &[1.0], &p).is_err());
    }
}
