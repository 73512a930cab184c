//! Command-line front end for heterogeneous subset selection.
//!
//! Pipeline: `extract-patches` cuts seven windows per source image,
//! `extract-features` computes per-patch image metrics, `sample` selects a
//! uniformly covering subset by minimizing FUS over many trials, `diagnose`
//! reports histograms / PCA / coverage, and `run-all` chains all four.
//!
//! All randomness flows from `--seed`; outputs are byte-identical across
//! reruns with equal inputs and configuration, for any `--threads` value.

mod commands;
mod config;
mod error;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hetsample",
    version,
    about = "Select heterogeneous, uniformly covering subsets of feature-mapped datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract seven windows per source image, filtered by vessel content.
    ExtractPatches(commands::extract_patches::Args),
    /// Compute per-patch image metrics and the detrended heterogeneity.
    ExtractFeatures(commands::extract_features::Args),
    /// Select a subset minimizing the farthest-unselected-sample distance.
    Sample(commands::sample::Args),
    /// Emit histogram, PCA and coverage reports for a selection.
    Diagnose(commands::diagnose::Args),
    /// Run the whole pipeline: patches, features, sampling, diagnostics.
    RunAll(commands::run_all::Args),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::ExtractPatches(args) => commands::extract_patches::run(args),
        Command::ExtractFeatures(args) => commands::extract_features::run(args),
        Command::Sample(args) => commands::sample::run(args),
        Command::Diagnose(args) => commands::diagnose::run(args),
        Command::RunAll(args) => commands::run_all::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
