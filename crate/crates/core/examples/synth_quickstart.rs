//! Generate the synthetic benchmark, write it as CSV and read it back.
//!
//! cargo run --example synth_quickstart

use biosustain::data::{read_csv, synth_generate, write_csv, FeatureSchema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = synth_generate(500, 0.1, 42)?;
    println!("{} rows, {} columns", table.n(), table.p());

    for target in ["SEF", "SCI", "OMF", "RRR"] {
        let y = table.column(target)?;
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let (lo, hi) = y
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        println!("{target}: mean {mean:.4}, range [{lo:.4}, {hi:.4}]");
    }

    let mut buf = Vec::new();
    write_csv(&table, &mut buf)?;
    let back = read_csv(buf.as_slice(), &FeatureSchema::default_schema())?;
    assert_eq!(back.values(), table.values());
    println!("csv round trip: {} bytes, lossless", buf.len());
    Ok(())
}
