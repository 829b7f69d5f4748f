//! Decision tree, random forest and gradient boosting side by side, with
//! impurity importance from the forest.
//!
//! cargo run --example tree_ensembles

use biosustain::data::{split_indices, synth_generate, SplitSpec};
use biosustain::metrics::r_squared;
use biosustain::models::ModelSpec;
use biosustain::tree::{feature_importance, ForestParams, GbtParams, TreeParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(1000, 0.1, 42)?;
    let names = table.schema().feature_names();
    let x = table.matrix_of(&names)?;
    let y = table.column("SEF")?;
    let (train, test) = split_indices(table.n(), &SplitSpec { train_fraction: 0.8, seed: 7 })?;
    let (xtr, xte) = (x.select_rows(&train), x.select_rows(&test));
    let ytr: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let yte: Vec<f64> = test.iter().map(|&i| y[i]).collect();

    let specs = [
        ("decision tree", ModelSpec::Tree(TreeParams::default())),
        ("random forest", ModelSpec::Forest(ForestParams::default())),
        ("gradient boosting", ModelSpec::Gbt(GbtParams::default())),
    ];
    for (label, spec) in &specs {
        let model = spec.fit(&xtr, &ytr)?;
        let r2 = r_squared(&model.predict(&xte)?, &yte)?;
        println!("{label:<18} test R² {r2:.4}");
    }

    let forest = specs[1].1.fit(&xtr, &ytr)?;
    let mut ranked: Vec<(&str, f64)> = names.iter().copied().zip(feature_importance(&forest)?).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("\nforest importance:");
    for (name, w) in ranked.iter().take(6) {
        println!("  {name:<20} {w:.4}");
    }
    Ok(())
}
