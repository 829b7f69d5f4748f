//! Ordinary least squares and ridge regression on a standardized split.
//!
//! cargo run --example linear_models

use biosustain::data::{split_indices, synth_generate, ColumnStats, SplitSpec};
use biosustain::metrics::evaluate;
use biosustain::models::linear::{ols_fit, ridge_fit};
use biosustain::models::RidgeParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(1000, 0.1, 1)?;
    let names = table.schema().feature_names();
    let x = table.matrix_of(&names)?;
    let y = table.column("SEF")?;
    let (train, test) = split_indices(table.n(), &SplitSpec { train_fraction: 0.8, seed: 1 })?;
    let stats = ColumnStats::fit(&x.select_rows(&train))?;
    let (xtr, xte) = (stats.apply(&x.select_rows(&train))?, stats.apply(&x.select_rows(&test))?);
    let ytr: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let yte: Vec<f64> = test.iter().map(|&i| y[i]).collect();

    let ols = ols_fit(&xtr, &ytr)?;
    let pred: Vec<f64> = xte.rows_iter().map(|r| ols.predict_row(r)).collect();
    let m = evaluate(&pred, &yte)?;
    println!("OLS           test R² {:.4}  RMSE {:.4}  MAE {:.4}", m.r2, m.rmse, m.mae);

    for alpha in [0.01, 1.0, 100.0, 10_000.0] {
        let model = ridge_fit(&xtr, &ytr, &RidgeParams { alpha, ..Default::default() })?;
        let norm = model.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
        let pred: Vec<f64> = xte.rows_iter().map(|r| model.predict_row(r)).collect();
        let m = evaluate(&pred, &yte)?;
        println!("ridge α={alpha:<7} test R² {:.4}  |β| {norm:.4}", m.r2);
    }
    Ok(())
}
