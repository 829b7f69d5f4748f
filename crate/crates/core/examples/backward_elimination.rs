//! Backward feature elimination with kNN on the SEF indicator.
//!
//! cargo run --example backward_elimination

use biosustain::data::{synth_generate, ColumnStats};
use biosustain::models::{KnnParams, ModelSpec};
use biosustain::selection::backward_eliminate_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(600, 0.1, 42)?;
    let names: Vec<String> = table.schema().feature_names().into_iter().map(String::from).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let x = table.matrix_of(&refs)?;
    let x = ColumnStats::fit(&x)?.apply(&x)?;
    let y = table.column("SEF")?;

    let knn = ModelSpec::Knn(KnnParams { k: 10, ..Default::default() });
    let result = backward_eliminate_matrix(&knn, &x, &y, &names, 1, 5, 42)?;
    println!("all features: CV negative MAE {:.5}", result.initial_score);
    for (i, step) in result.steps.iter().enumerate() {
        println!("{:>2}. drop {:<20} -> {:.5} ({} left)", i + 1, step.removed, step.score, step.remaining);
    }
    println!("selected: {}", result.selected.join(", "));
    Ok(())
}
