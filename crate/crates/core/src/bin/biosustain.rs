//! Command-line front end. Every subcommand calls one library entry point
//! and writes the returned artifacts unchanged.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biosustain::data::{synth_generate, write_csv, DataError};
use biosustain::experiment::{
    importance_artifacts, run_experiment, selection_artifacts, sweep_artifacts, write_artifacts,
    ExperimentSpec, SweepKind,
};
use biosustain::Error;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "biosustain", version, about = "Regression benchmark for biomass sustainability indicators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the seeded synthetic dataset as CSV.
    Synth {
        /// Number of rows.
        #[arg(long)]
        n: usize,
        /// Noise level as a fraction of each indicator's standard deviation.
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full benchmark described by a config file.
    Run(ConfigArgs),
    /// Run one hyperparameter sweep.
    Sweep {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Run backward feature elimination per target.
    Select(ConfigArgs),
    /// Write random-forest feature importance per target.
    Importance(ConfigArgs),
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Knn,
    Svr,
    Rf,
}

impl From<Which> for SweepKind {
    fn from(w: Which) -> Self {
        match w {
            Which::Knn => SweepKind::Knn,
            Which::Svr => SweepKind::Svr,
            Which::Rf => SweepKind::Rf,
        }
    }
}

fn synth(n: usize, sigma: f64, seed: u64, out: &Path) -> Result<(), Error> {
    let table = synth_generate(n, sigma, seed)?;
    let file = std::fs::File::create(out).map_err(|source| DataError::Io {
        path: out.display().to_string(),
        source,
    })?;
    write_csv(&table, std::io::BufWriter::new(file))?;
    let schema = table.schema();
    println!("wrote {} rows x {} columns to {}", table.n(), table.p(), out.display());
    println!("features: {}", schema.feature_names().join(", "));
    println!("targets: {}", schema.target_names().join(", "));
    Ok(())
}

fn with_config(
    args: &ConfigArgs,
    f: impl FnOnce(&ExperimentSpec) -> Result<Vec<biosustain::experiment::Artifact>, Error>,
) -> Result<(), Error> {
    let spec = ExperimentSpec::from_file(&args.config)?;
    let artifacts = f(&spec)?;
    write_artifacts(&args.out, &artifacts)?;
    for a in &artifacts {
        println!("{}", args.out.join(&a.name).display());
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Synth { n, sigma, seed, out } => synth(n, sigma, seed, &out),
        Command::Run(args) => with_config(&args, |s| Ok(run_experiment(s)?.artifacts())),
        Command::Sweep { which, args } => with_config(&args, |s| sweep_artifacts(s, which.into())),
        Command::Select(args) => with_config(&args, selection_artifacts),
        Command::Importance(args) => with_config(&args, importance_artifacts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.category().exit_code() as u8)
        }
    }
}
