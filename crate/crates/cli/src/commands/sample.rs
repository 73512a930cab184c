//! `sample`: z-score, discretize, dilate and best-of-N FUS selection.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use hetsample::feature_space::{apply_zscore, discretize, fit_zscore, FeatureMatrix, GridConfig};
use hetsample::sampling::{
    build_structuring_element, dilate, select, SelectionParams, TIE_BREAK_POLICY,
};

use crate::config::{RunConfig, CommonOpts, VERSION};
use crate::error::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input feature CSV (id column, optional group column, feature columns).
    #[arg(long, value_name = "FILE")]
    pub features: PathBuf,

    /// Output selection JSON.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Optional per-trial FUS log CSV.
    #[arg(long, value_name = "FILE")]
    pub trial_log: Option<PathBuf>,

    #[command(flatten)]
    pub common: CommonOpts,
}

/// Selection output format; embeds the resolved run config and tool version.
#[derive(Debug, Serialize, Deserialize)]
pub struct SelectionReport {
    pub version: String,
    pub selected_ids: Vec<String>,
    pub fus: f64,
    pub winning_trial: usize,
    pub seed: u64,
    pub k: usize,
    pub n_trials: usize,
    pub cell_size: f64,
    pub radius: f64,
    pub dropped_features: Vec<String>,
    pub tie_break_policy: String,
    pub config: RunConfig,
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let config = {
        let mut c = args.common.resolve()?;
        c.paths.insert("features".into(), args.features.display().to_string());
        c.paths.insert("out".into(), args.out.display().to_string());
        if let Some(log) = &args.trial_log {
            c.paths.insert("trial_log".into(), log.display().to_string());
        }
        c
    };
    crate::config::init_threads(&config);
    let report = sample_pipeline(&config)?;

    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    std::fs::write(&args.out, text)
        .map_err(|e| CliError::input(format!("writing `{}`: {e}", args.out.display())))?;
    println!(
        "selected k={} samples over {} trials: fus={} (trial {})",
        report.k, report.n_trials, report.fus, report.winning_trial
    );
    Ok(())
}

/// The full sampling pipeline on a resolved config. `config.paths` must hold
/// the `features` input and may hold a `trial_log` output.
pub fn sample_pipeline(config: &RunConfig) -> Result<SelectionReport, CliError> {
    let features_path = &config.paths["features"];
    let (matrix, skipped) = FeatureMatrix::from_csv_path(features_path, &config.group_column)
        .map_err(CliError::from)?;
    for s in &skipped {
        eprintln!("warning: skipped {s}");
    }
    let matrix = match &config.feature_columns {
        Some(columns) => matrix.with_features(columns).map_err(CliError::from)?,
        None => matrix,
    };
    if matrix.n_features() == 0 {
        return Err(CliError::config("feature CSV has no feature columns".into()));
    }

    let model = fit_zscore(&matrix).map_err(CliError::from)?;
    for w in model.warnings() {
        eprintln!("warning: {w}");
    }
    let z = apply_zscore(&matrix, &model).map_err(CliError::from)?;
    let grid_config = GridConfig::new(config.cell_size).map_err(CliError::from)?;
    let grid = discretize(&z, &grid_config);
    let element =
        build_structuring_element(z.n_features(), config.radius).map_err(CliError::from)?;
    let sset = dilate(&grid, &element).map_err(CliError::from)?;
    let params = SelectionParams {
        k: config.k,
        n_trials: config.n_trials,
        seed: config.seed,
        enforce_group_exclusion: config.group_exclusion,
    };
    let run = select(&z, &grid, &sset, &params).map_err(CliError::from)?;

    if let Some(log_path) = config.paths.get("trial_log") {
        let mut wtr = csv::Writer::from_path(log_path)?;
        wtr.write_record(["trial_index", "fus"])?;
        for (i, fus) in run.trial_fus.iter().enumerate() {
            wtr.write_record([i.to_string(), fus.to_string()])?;
        }
        wtr.flush()?;
    }

    Ok(SelectionReport {
        version: VERSION.to_string(),
        selected_ids: run.result.selected_ids,
        fus: run.result.fus,
        winning_trial: run.result.winning_trial,
        seed: config.seed,
        k: config.k,
        n_trials: config.n_trials,
        cell_size: config.cell_size,
        radius: config.radius,
        dropped_features: model.dropped_feature_names(),
        tie_break_policy: TIE_BREAK_POLICY.to_string(),
        config: config.clone(),
    })
}
