//! Voting and stacking presets built from the default hyperparameters.
//!
//! cargo run --example voting_stacking

use biosustain::data::{split_indices, synth_generate, ColumnStats, SplitSpec};
use biosustain::ensembles::{out_of_fold, preset, PRESET_NAMES};
use biosustain::experiment::ModelCatalog;
use biosustain::metrics::r_squared;
use biosustain::models::{KnnParams, ModelSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(600, 0.1, 42)?;
    let names = table.schema().feature_names();
    let x = table.matrix_of(&names)?;
    let y = table.column("SCI")?;
    let (train, test) = split_indices(table.n(), &SplitSpec { train_fraction: 0.8, seed: 2 })?;
    let stats = ColumnStats::fit(&x.select_rows(&train))?;
    let (xtr, xte) = (stats.apply(&x.select_rows(&train))?, stats.apply(&x.select_rows(&test))?);
    let ytr: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let yte: Vec<f64> = test.iter().map(|&i| y[i]).collect();

    let mut catalog = ModelCatalog::default();
    catalog.mlp.epochs = 50;
    for name in PRESET_NAMES {
        let spec = preset(name, &catalog).expect("listed preset");
        let model = spec.fit(&xtr, &ytr)?;
        println!("{name:<12} test R² {:.4}", r_squared(&model.predict(&xte)?, &yte)?);
    }

    let bases = [ModelSpec::Knn(KnnParams::default()), ModelSpec::Linear];
    let oof = out_of_fold(&bases, &xtr, &ytr, 5, 0)?;
    println!("\nout-of-fold meta features: {} rows x {} columns", oof.meta.nrows(), oof.meta.ncols());
    for (j, b) in bases.iter().enumerate() {
        println!("  {:<8} out-of-fold R² {:.4}", b.name(), r_squared(&oof.meta.column(j), &ytr)?);
    }
    Ok(())
}
