//! `extract-features`: per-patch image metrics plus the dataset-level
//! detrend pass that fills the normalized heterogeneity column.

use std::path::PathBuf;

use serde::Serialize;

use hetsample::exec;
use hetsample::image::{BinaryMask, GrayImage};
use hetsample::metrics::{detrend, extract_metrics, fit_detrend};

use crate::config::{write_meta, CommonOpts, Meta, VERSION};
use crate::error::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Patch manifest produced by `extract-patches`.
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,

    /// Output feature CSV.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    #[command(flatten)]
    pub common: CommonOpts,
}

/// One output row; numeric fields are `None` when their metric failed.
struct Row {
    id: String,
    group: String,
    contrast: Option<f64>,
    noise_sigma: Option<f64>,
    vessel_density: Option<f64>,
    heterogeneity: Option<f64>,
    mean_medial_intensity: Option<f64>,
    detrended: Option<f64>,
    error: String,
}

#[derive(Debug, Serialize)]
struct Summary {
    rows_total: usize,
    rows_ok: usize,
    detrend_slope: f64,
    detrend_intercept: f64,
    failed_rows: Vec<String>,
}

fn opt(v: &Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let config = {
        let mut c = args.common.resolve()?;
        c.paths.insert("manifest".into(), args.manifest.display().to_string());
        c.paths.insert("out".into(), args.out.display().to_string());
        c
    };
    crate::config::init_threads(&config);

    let mut rdr = csv::Reader::from_path(&args.manifest)
        .map_err(|e| CliError::input(format!("cannot read manifest `{}`: {e}", args.manifest.display())))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize, CliError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::input(format!("manifest is missing column `{name}`")))
    };
    let (id_col, source_col) = (col("patch_id")?, col("source_id")?);
    let mut entries: Vec<(String, String)> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        entries.push((record[id_col].to_string(), record[source_col].to_string()));
    }
    if entries.is_empty() {
        return Err(CliError::input(format!(
            "manifest `{}` has no patches",
            args.manifest.display()
        )));
    }
    let base = args
        .manifest
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));

    let mut rows: Vec<Row> = exec::map_indexed(entries.len(), |i| {
        let (patch_id, source_id) = &entries[i];
        metric_row(patch_id, source_id, &base)
    });

    // dataset-level detrend over the rows with a valid (m, h) pair
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| Some((r.mean_medial_intensity?, r.heterogeneity?)))
        .collect();
    let model = fit_detrend(&points).map_err(CliError::from)?;
    for row in &mut rows {
        if let (Some(m), Some(h)) = (row.mean_medial_intensity, row.heterogeneity) {
            row.detrended = Some(detrend(h, m, &model));
        }
    }

    let mut wtr = csv::Writer::from_path(&args.out)?;
    wtr.write_record([
        "id",
        "group",
        "contrast",
        "noise_sigma",
        "vessel_density",
        "heterogeneity",
        "mean_medial_intensity",
        "detrended_heterogeneity",
        "error",
    ])?;
    for row in &rows {
        wtr.write_record([
            row.id.clone(),
            row.group.clone(),
            opt(&row.contrast),
            opt(&row.noise_sigma),
            opt(&row.vessel_density),
            opt(&row.heterogeneity),
            opt(&row.mean_medial_intensity),
            opt(&row.detrended),
            row.error.clone(),
        ])?;
    }
    wtr.flush()?;

    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.error.is_empty())
        .map(|r| format!("{}: {}", r.id, r.error))
        .collect();
    for f in &failed {
        eprintln!("warning: {f}");
    }
    let summary = Summary {
        rows_total: rows.len(),
        rows_ok: rows.len() - failed.len(),
        detrend_slope: model.slope,
        detrend_intercept: model.intercept,
        failed_rows: failed,
    };
    write_meta(
        &PathBuf::from(format!("{}.meta.json", args.out.display())),
        &Meta {
            version: VERSION,
            config: &config,
            summary: &summary,
        },
    )?;
    println!(
        "extracted metrics for {}/{} patches (detrend slope {:.6}, intercept {:.6})",
        summary.rows_ok, summary.rows_total, model.slope, model.intercept
    );
    Ok(())
}

fn metric_row(patch_id: &str, source_id: &str, base: &std::path::Path) -> Row {
    let mut row = Row {
        id: patch_id.to_string(),
        group: source_id.to_string(),
        contrast: None,
        noise_sigma: None,
        vessel_density: None,
        heterogeneity: None,
        mean_medial_intensity: None,
        detrended: None,
        error: String::new(),
    };
    let mut errors: Vec<String> = Vec::new();
    let image = GrayImage::open(base.join(format!("{patch_id}.png")));
    let mask = BinaryMask::open(base.join("masks").join(format!("{patch_id}.png")));
    match (image, mask) {
        (Ok(image), Ok(mask)) => match extract_metrics(&image, &mask) {
            Ok(report) => {
                match report.contrast {
                    Ok(c) => row.contrast = Some(c),
                    Err(e) => errors.push(format!("contrast: {e}")),
                }
                match report.noise_sigma {
                    Ok(s) => row.noise_sigma = Some(s),
                    Err(e) => errors.push(format!("noise_sigma: {e}")),
                }
                row.vessel_density = Some(report.vessel_density);
                match report.medial {
                    Ok((h, m)) => {
                        row.heterogeneity = Some(h);
                        row.mean_medial_intensity = Some(m);
                    }
                    Err(e) => errors.push(format!("heterogeneity: {e}")),
                }
            }
            Err(e) => errors.push(e.to_string()),
        },
        (image, mask) => {
            if let Err(e) = image {
                errors.push(format!("image: {e}"));
            }
            if let Err(e) = mask {
                errors.push(format!("mask: {e}"));
            }
        }
    }
    row.error = errors.join("; ");
    row
}
