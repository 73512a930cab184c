//! `run-all`: the full pipeline in one invocation.
//!
//! Layout under the output directory:
//!   patches/          patch images, mask patches, manifest
//!   features.csv      per-patch metrics with detrended heterogeneity
//!   selection.json    winning subset
//!   trials.csv        per-trial FUS log
//!   diagnostics/      histograms, PCA, coverage

use std::path::PathBuf;

use crate::commands::{diagnose, extract_features, extract_patches, sample};
use crate::config::CommonOpts;
use crate::error::CliError;

/// Feature columns used for sampling when none are requested explicitly:
/// the four per-image metrics, with heterogeneity in its detrended form.
pub const DEFAULT_SAMPLING_FEATURES: [&str; 4] = [
    "contrast",
    "noise_sigma",
    "vessel_density",
    "detrended_heterogeneity",
];

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory of grayscale source images (PNG/PGM).
    #[arg(long, value_name = "DIR")]
    pub images: PathBuf,

    /// Directory of segmentation masks paired by file stem.
    #[arg(long, value_name = "DIR")]
    pub masks: PathBuf,

    /// Output directory for every pipeline artifact.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: &Args) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.out)?;
    let patches_dir = args.out.join("patches");
    let features_csv = args.out.join("features.csv");
    let selection_json = args.out.join("selection.json");
    let trials_csv = args.out.join("trials.csv");
    let diagnostics_dir = args.out.join("diagnostics");

    extract_patches::run(&extract_patches::Args {
        images: args.images.clone(),
        masks: args.masks.clone(),
        out: patches_dir.clone(),
        common: args.common.clone(),
    })?;

    extract_features::run(&extract_features::Args {
        manifest: patches_dir.join("patches.csv"),
        out: features_csv.clone(),
        common: args.common.clone(),
    })?;

    let mut sample_common = args.common.clone();
    if sample_common.feature_columns.is_none() {
        sample_common.feature_columns =
            Some(DEFAULT_SAMPLING_FEATURES.iter().map(|s| s.to_string()).collect());
    }
    // patches inherit their source image as group; exclusion prevents two
    // windows of one source from both being selected
    sample::run(&sample::Args {
        features: features_csv.clone(),
        out: selection_json.clone(),
        trial_log: Some(trials_csv),
        common: sample_common.clone(),
    })?;

    diagnose::run(&diagnose::Args {
        features: features_csv,
        selection: selection_json,
        out: diagnostics_dir,
        common: sample_common,
    })?;

    println!("pipeline complete: artifacts under `{}`", args.out.display());
    Ok(())
}
