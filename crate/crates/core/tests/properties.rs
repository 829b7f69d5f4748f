//! Property tests for model invariants.

use biosustain::models::linear::{ols_fit, ridge_fit};
use biosustain::models::mlp::mlp_fit;
use biosustain::models::svr::svr_fit_detailed;
use biosustain::models::{Activation, Kernel, MlpParams, ModelSpec, RidgeParams, SvrParams};
use biosustain::tree::{tree_fit, ForestParams, GbtParams, TreeParams};
use biosustain::Matrix;
use proptest::prelude::*;

fn problem(n: usize, p: usize) -> impl Strategy<Value = (Matrix, Vec<f64>)> {
    (
        prop::collection::vec(-3.0f64..3.0, n * p),
        prop::collection::vec(-3.0f64..3.0, n),
    )
        .prop_map(move |(x, y)| (Matrix::from_vec(n, p, x), y))
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ols_residuals_are_orthogonal((x, y) in problem(30, 3)) {
        let m = ols_fit(&x, &y).unwrap();
        let r: Vec<f64> = x.rows_iter().zip(&y).map(|(row, t)| t - m.predict_row(row)).collect();
        let scale = sq_norm(&y).sqrt().max(1.0);
        prop_assert!(r.iter().sum::<f64>().abs() < 1e-8 * scale);
        for j in 0..3 {
            let dot: f64 = x.column(j).iter().zip(&r).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() < 1e-8 * scale, "column {j}: {dot}");
        }
    }

    #[test]
    fn ridge_shrinks_monotonically((x, y) in problem(25, 4)) {
        let mut last = f64::INFINITY;
        for alpha in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let m = ridge_fit(&x, &y, &RidgeParams { alpha, ..Default::default() }).unwrap();
            let norm = sq_norm(&m.coefficients);
            prop_assert!(norm <= last * (1.0 + 1e-9), "alpha {alpha}: {norm} > {last}");
            last = norm;
        }
    }

    #[test]
    fn svr_duals_satisfy_box_and_balance((x, y) in problem(25, 2), c in 0.5f64..4.0) {
        let params = SvrParams { kernel: Kernel::Rbf { gamma: None }, c, ..Default::default() };
        let fit = svr_fit_detailed(&x, &y, &params).unwrap();
        let balance: f64 = fit.alpha.iter().zip(&fit.alpha_star).map(|(a, s)| a - s).sum();
        prop_assert!(balance.abs() < 1e-8);
        for (a, s) in fit.alpha.iter().zip(&fit.alpha_star) {
            prop_assert!((-1e-12..=c + 1e-12).contains(a));
            prop_assert!((-1e-12..=c + 1e-12).contains(s));
            prop_assert!(a * s < 1e-12);
        }
    }

    #[test]
    fn mlp_training_reduces_loss((x, _) in problem(40, 3), seed in 0u64..1000) {
        let y: Vec<f64> = x.rows_iter().map(|r| r[0].sin() + r[1] * r[2]).collect();
        let params = MlpParams {
            hidden_layers: vec![8],
            activation: Activation::Tanh,
            learning_rate: 0.05,
            epochs: 200,
            batch_size: 8,
            seed,
            ..Default::default()
        };
        let model = mlp_fit(&x, &y, &params).unwrap();
        prop_assert!(model.final_loss < model.initial_loss);
        let mse = |f: &dyn Fn(&[f64]) -> f64| {
            x.rows_iter().zip(&y).map(|(r, t)| (f(r) - t).powi(2)).sum::<f64>() / y.len() as f64
        };
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        prop_assert!(mse(&|r| model.predict_row(r)) < mse(&|_| mean));
    }

    #[test]
    fn tree_predictions_stay_within_target_range((x, y) in problem(30, 2), depth in 1usize..6) {
        let t = tree_fit(&x, &y, &TreeParams { max_depth: Some(depth), ..Default::default() }).unwrap();
        let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for r in x.rows_iter() {
            let p = t.predict_row(r);
            prop_assert!(p >= lo - 1e-12 && p <= hi + 1e-12);
        }
    }

    #[test]
    fn seeded_fits_are_deterministic((x, y) in problem(30, 3), seed in any::<u64>()) {
        let specs = [
            ModelSpec::Forest(ForestParams { n_trees: 10, ..Default::default() }),
            ModelSpec::Mlp(MlpParams { epochs: 10, ..Default::default() }),
            ModelSpec::Gbt(GbtParams { n_estimators: 10, ..Default::default() }),
        ];
        for mut spec in specs {
            spec.reseed(seed);
            let a = spec.fit(&x, &y).unwrap().predict(&x).unwrap();
            let b = spec.fit(&x, &y).unwrap().predict(&x).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
