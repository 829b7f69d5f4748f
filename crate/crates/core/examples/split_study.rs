//! Train/test R² at 80:20, 70:30 and 60:40 splits for the RRR target.
//!
//! cargo run --example split_study

use biosustain::experiment::{run_split_study, ExperimentSpec};

const CONFIG: &str = r#"{
    "data": {"source": "synth", "n": 600, "noise_sigma": 0.1, "seed": 42},
    "targets": ["RRR"],
    "models": ["LinearRegression", "KNN", "DecisionTree", "GradientBoosting", "RandomForest"],
    "split_fractions": [0.8, 0.7, 0.6]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ExperimentSpec::from_json(CONFIG, std::path::Path::new("."))?;
    for study in run_split_study(&spec)? {
        print!("{}", study.to_markdown());
    }
    Ok(())
}
