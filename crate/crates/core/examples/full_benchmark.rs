//! Run a JSON config end to end and write every report file.
//!
//! cargo run --example full_benchmark -- [config.json] [out_dir]

use biosustain::experiment::{run_experiment, write_artifacts, ExperimentSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/quick.json").into());
    let out = args.next().unwrap_or_else(|| "benchmark_out".into());

    let spec = ExperimentSpec::from_file(&config)?;
    let output = run_experiment(&spec)?;
    for t in &output.targets {
        print!("{}", t.results.to_markdown());
        println!();
    }
    let artifacts = output.artifacts();
    write_artifacts(&out, &artifacts)?;
    println!("wrote {} files to {out}", artifacts.len());
    Ok(())
}
