//! kNN test R² as the neighbour count varies, for three indicators.
//!
//! cargo run --example knn_sweep

use biosustain::experiment::{prepare_target, load_table, ExperimentSpec};
use biosustain::models::KnnParams;
use biosustain::selection::sweep_knn_k;

const CONFIG: &str = r#"{
    "data": {"source": "synth", "n": 800, "noise_sigma": 0.1, "seed": 42},
    "targets": ["SEF", "SCI", "OMF"],
    "models": ["KNN"]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ExperimentSpec::from_json(CONFIG, std::path::Path::new("."))?;
    let table = load_table(&spec)?;
    let data = spec
        .targets
        .iter()
        .map(|t| prepare_target(&spec, &table, t, 0.8).map(|p| p.data))
        .collect::<Result<Vec<_>, _>>()?;
    let ks: Vec<usize> = (1..=20).collect();
    let sweep = sweep_knn_k(&data, &ks, &KnnParams::default());
    print!("{}", sweep.to_tsv());
    Ok(())
}
