//! ε-SVR with sigmoid, RBF and polynomial kernels; reports solver stats.
//!
//! cargo run --example svr_kernels

use biosustain::data::{split_indices, synth_generate, ColumnStats, SplitSpec};
use biosustain::metrics::r_squared;
use biosustain::models::svr::svr_fit_detailed;
use biosustain::models::{Kernel, SvrParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(600, 0.1, 3)?;
    let names = table.schema().feature_names();
    let x = table.matrix_of(&names)?;
    let y = table.column("OMF")?;
    let (train, test) = split_indices(table.n(), &SplitSpec { train_fraction: 0.8, seed: 3 })?;
    let stats = ColumnStats::fit(&x.select_rows(&train))?;
    let (xtr, xte) = (stats.apply(&x.select_rows(&train))?, stats.apply(&x.select_rows(&test))?);
    let ytr: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let yte: Vec<f64> = test.iter().map(|&i| y[i]).collect();

    for name in ["sigmoid", "rbf", "polynomial"] {
        let params = SvrParams {
            kernel: Kernel::from_name(name).expect("known kernel"),
            ..Default::default()
        };
        match svr_fit_detailed(&xtr, &ytr, &params) {
            Ok(fit) => {
                let pred: Vec<f64> = xte.rows_iter().map(|r| fit.model.predict_row(r)).collect();
                println!(
                    "{name:<10} test R² {:.4}  support vectors {:>4}  iterations {:>6}  gap {:.2e}",
                    r_squared(&pred, &yte)?,
                    fit.model.support_vector_count(),
                    fit.iterations,
                    fit.violation
                );
            }
            Err(e) => println!("{name:<10} failed: {e}"),
        }
    }
    Ok(())
}
