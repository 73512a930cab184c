//! `diagnose`: per-feature histogram comparisons, 2-d PCA projection with
//! selected samples highlighted, and a coverage report.

use std::collections::HashSet;
use std::path::PathBuf;

use serde::Serialize;

use hetsample::diagnostics::{coverage_report, histogram_pair, pca_project, pca_svg, CoverageReport};
use hetsample::feature_space::{apply_zscore, discretize, fit_zscore, FeatureMatrix, GridConfig};
use hetsample::sampling::{SelectionParams, SelectionResult};

use crate::commands::sample::SelectionReport;
use crate::config::{write_meta, CommonOpts, Meta, RunConfig, VERSION};
use crate::error::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Feature CSV that the selection was sampled from.
    #[arg(long, value_name = "FILE")]
    pub features: PathBuf,

    /// Selection JSON produced by `sample`.
    #[arg(long, value_name = "FILE")]
    pub selection: PathBuf,

    /// Output directory for histograms, PCA files and the coverage report.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct CoverageFile<'a> {
    version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    report: &'a CoverageReport,
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let config = {
        let mut c = args.common.resolve()?;
        c.paths.insert("features".into(), args.features.display().to_string());
        c.paths.insert("selection".into(), args.selection.display().to_string());
        c.paths.insert("out".into(), args.out.display().to_string());
        c
    };
    crate::config::init_threads(&config);

    let selection_text = std::fs::read_to_string(&args.selection)
        .map_err(|e| CliError::input(format!("cannot read `{}`: {e}", args.selection.display())))?;
    let selection: SelectionReport = serde_json::from_str(&selection_text)
        .map_err(|e| CliError::input(format!("invalid selection JSON: {e}")))?;

    let (matrix, skipped) =
        FeatureMatrix::from_csv_path(&args.features, &config.group_column).map_err(CliError::from)?;
    for s in &skipped {
        eprintln!("warning: skipped {s}");
    }
    // diagnose on the feature set the selection ran on
    let matrix = match &selection.config.feature_columns {
        Some(columns) => matrix.with_features(columns).map_err(CliError::from)?,
        None => matrix,
    };
    let known: HashSet<&str> = matrix.ids().iter().map(|s| s.as_str()).collect();
    for id in &selection.selected_ids {
        if !known.contains(id.as_str()) {
            return Err(CliError::config(format!(
                "selection id `{id}` is not present in the feature CSV"
            )));
        }
    }
    let selected_set: HashSet<&str> = selection.selected_ids.iter().map(|s| s.as_str()).collect();

    std::fs::create_dir_all(&args.out)?;

    // per-feature histograms: full data vs selected subset
    for (j, feature) in matrix.feature_names().iter().enumerate() {
        let full: Vec<f64> = (0..matrix.n_samples()).map(|i| matrix.row(i)[j]).collect();
        let subset: Vec<f64> = (0..matrix.n_samples())
            .filter(|&i| selected_set.contains(matrix.ids()[i].as_str()))
            .map(|i| matrix.row(i)[j])
            .collect();
        let hist = histogram_pair(&full, &subset, config.bins, feature).map_err(CliError::from)?;
        let path = args.out.join(format!("hist_{}.csv", sanitize(feature)));
        let mut wtr = csv::Writer::from_path(&path)?;
        wtr.write_record(["bin_left", "bin_right", "full_freq", "subset_freq"])?;
        for b in 0..hist.full_freq.len() {
            wtr.write_record([
                hist.bin_edges[b].to_string(),
                hist.bin_edges[b + 1].to_string(),
                hist.full_freq[b].to_string(),
                hist.subset_freq[b].to_string(),
            ])?;
        }
        wtr.flush()?;
    }

    // z-scored PCA with the selection highlighted
    let model = fit_zscore(&matrix).map_err(CliError::from)?;
    let z = apply_zscore(&matrix, &model).map_err(CliError::from)?;
    let projection = pca_project(&z, &selection.selected_ids).map_err(CliError::from)?;
    let mut wtr = csv::Writer::from_path(args.out.join("pca.csv"))?;
    wtr.write_record(["id", "pc1", "pc2", "selected"])?;
    for i in 0..z.n_samples() {
        wtr.write_record([
            z.ids()[i].clone(),
            projection.coords[i][0].to_string(),
            projection.coords[i][1].to_string(),
            projection.selected_flags[i].to_string(),
        ])?;
    }
    wtr.flush()?;
    std::fs::write(args.out.join("pca.svg"), pca_svg(&projection))?;

    // coverage over the selection's own grid geometry
    let grid_config = GridConfig::new(selection.cell_size).map_err(CliError::from)?;
    let grid = discretize(&z, &grid_config);
    let result = SelectionResult {
        selected_ids: selection.selected_ids.clone(),
        fus: selection.fus,
        winning_trial: selection.winning_trial,
        params: SelectionParams {
            k: selection.k,
            n_trials: selection.n_trials,
            seed: selection.seed,
            enforce_group_exclusion: selection.config.group_exclusion,
        },
        grid_config,
    };
    let coverage = coverage_report(&result, &z, &grid, selection.radius).map_err(CliError::from)?;
    let mut text = serde_json::to_string_pretty(&CoverageFile {
        version: VERSION,
        config: &config,
        report: &coverage,
    })?;
    text.push('\n');
    std::fs::write(args.out.join("coverage.json"), text)?;

    write_meta(
        &args.out.join("run.meta.json"),
        &Meta {
            version: VERSION,
            config: &config,
            summary: serde_json::json!({
                "features": matrix.feature_names(),
                "samples": matrix.n_samples(),
                "selected": selection.selected_ids.len(),
            }),
        },
    )?;
    println!(
        "diagnostics for {} features over {} samples written to `{}` (coverage fus={})",
        matrix.n_features(),
        matrix.n_samples(),
        args.out.display(),
        coverage.fus
    );
    Ok(())
}
