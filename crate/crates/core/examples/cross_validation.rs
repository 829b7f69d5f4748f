//! Ten-fold CV score distributions, the data behind a box plot.
//!
//! cargo run --example cross_validation

use biosustain::data::{synth_generate, ColumnStats};
use biosustain::models::{KnnParams, ModelSpec};
use biosustain::selection::k_fold_cv;
use biosustain::tree::{ForestParams, GbtParams, TreeParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(600, 0.1, 42)?;
    let names = table.schema().feature_names();
    let x = table.matrix_of(&names)?;
    let x = ColumnStats::fit(&x)?.apply(&x)?;
    let y = table.column("OMF")?;

    let specs = [
        ModelSpec::Linear,
        ModelSpec::Knn(KnnParams::default()),
        ModelSpec::Tree(TreeParams::default()),
        ModelSpec::Forest(ForestParams { n_trees: 50, ..Default::default() }),
        ModelSpec::Gbt(GbtParams::default()),
    ];
    println!("{:<8} {:>10} {:>10} {:>10} {:>10}", "model", "mean", "std", "min", "max");
    for spec in &specs {
        let cv = k_fold_cv(spec, &x, &y, 10, 7)?;
        let lo = cv.neg_mae.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = cv.neg_mae.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{:<8} {:>10.5} {:>10.5} {lo:>10.5} {hi:>10.5}",
            spec.name(),
            cv.mean_neg_mae(),
            cv.std_neg_mae()
        );
    }
    Ok(())
}
