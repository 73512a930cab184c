//! `extract-patches`: seven windows per source image, vessel-content filter,
//! patch/mask PNGs plus a manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use hetsample::exec;
use hetsample::image::BinaryMask;
use hetsample::patches::{filter_windows, plan_windows, PatchSpec};

use crate::config::{write_meta, CommonOpts, Meta, RunConfig, VERSION};
use crate::error::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory of grayscale source images (PNG/PGM).
    #[arg(long, value_name = "DIR")]
    pub images: PathBuf,

    /// Directory of segmentation masks paired by file stem.
    #[arg(long, value_name = "DIR")]
    pub masks: PathBuf,

    /// Output directory for patches, mask patches and the manifest.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct Summary {
    sources: usize,
    planned: usize,
    retained: usize,
    unpaired: Vec<String>,
    skipped_sources: Vec<String>,
}

fn list_by_stem(dir: &Path) -> Result<BTreeMap<String, PathBuf>, CliError> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::input(format!("cannot read `{}`: {e}", dir.display())))?;
    for entry in entries {
        let path = entry?.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "pgm"))
            .unwrap_or(false);
        if is_image {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.insert(stem.to_string(), path);
            }
        }
    }
    Ok(out)
}

struct SourceOutcome {
    rows: Vec<PatchSpec>,
    planned: usize,
    skipped: Option<String>,
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let config = {
        let mut c = args.common.resolve()?;
        c.paths.insert("images".into(), args.images.display().to_string());
        c.paths.insert("masks".into(), args.masks.display().to_string());
        c.paths.insert("out".into(), args.out.display().to_string());
        c
    };
    crate::config::init_threads(&config);

    let images = list_by_stem(&args.images)?;
    let masks = list_by_stem(&args.masks)?;
    let mut unpaired: Vec<String> = Vec::new();
    for stem in images.keys() {
        if !masks.contains_key(stem) {
            unpaired.push(format!("image `{stem}` has no mask"));
        }
    }
    for stem in masks.keys() {
        if !images.contains_key(stem) {
            unpaired.push(format!("mask `{stem}` has no image"));
        }
    }
    for w in &unpaired {
        eprintln!("warning: {w}");
    }
    let paired: Vec<(String, PathBuf, PathBuf)> = images
        .iter()
        .filter_map(|(stem, img)| {
            masks
                .get(stem)
                .map(|m| (stem.clone(), img.clone(), m.clone()))
        })
        .collect();
    if paired.is_empty() {
        return Err(CliError::input(format!(
            "no paired image/mask inputs under `{}` and `{}`",
            args.images.display(),
            args.masks.display()
        )));
    }

    std::fs::create_dir_all(args.out.join("masks"))?;

    let outcomes = exec::map_indexed(paired.len(), |i| -> Result<SourceOutcome, CliError> {
        let (stem, img_path, mask_path) = &paired[i];
        process_source(stem, img_path, mask_path, &args.out, &config)
    });

    let mut rows: Vec<PatchSpec> = Vec::new();
    let mut summary = Summary {
        sources: paired.len(),
        planned: 0,
        retained: 0,
        unpaired,
        skipped_sources: Vec::new(),
    };
    for outcome in outcomes {
        let outcome = outcome?;
        summary.planned += outcome.planned;
        summary.retained += outcome.rows.len();
        if let Some(reason) = outcome.skipped {
            eprintln!("warning: {reason}");
            summary.skipped_sources.push(reason);
        }
        rows.extend(outcome.rows);
    }
    rows.sort_by(|a, b| a.source_id.cmp(&b.source_id).then(a.kind.cmp(&b.kind)));

    let manifest_path = args.out.join("patches.csv");
    let mut wtr = csv::Writer::from_path(&manifest_path)?;
    wtr.write_record(["patch_id", "source_id", "kind", "x", "y", "size"])?;
    for spec in &rows {
        wtr.write_record([
            spec.patch_id(),
            spec.source_id.clone(),
            spec.kind.as_str().to_string(),
            spec.x.to_string(),
            spec.y.to_string(),
            spec.size.to_string(),
        ])?;
    }
    wtr.flush()?;

    write_meta(
        &args.out.join("patches.csv.meta.json"),
        &Meta {
            version: VERSION,
            config: &config,
            summary: &summary,
        },
    )?;
    println!(
        "planned {} windows over {} sources, retained {} patches ({} unpaired, {} skipped)",
        summary.planned,
        summary.sources,
        summary.retained,
        summary.unpaired.len(),
        summary.skipped_sources.len()
    );
    Ok(())
}

fn process_source(
    stem: &str,
    img_path: &Path,
    mask_path: &Path,
    out: &Path,
    config: &RunConfig,
) -> Result<SourceOutcome, CliError> {
    let image = image::open(img_path)?;
    let mask_img = image::open(mask_path)?;
    if image.width() != mask_img.width() || image.height() != mask_img.height() {
        return Err(CliError::input(format!(
            "source `{stem}`: image {}x{} and mask {}x{} differ in size",
            image.width(),
            image.height(),
            mask_img.width(),
            mask_img.height()
        )));
    }
    let specs = match plan_windows(stem, image.width(), image.height(), config.window_size, config.seed) {
        Ok(specs) => specs,
        Err(e @ hetsample::Error::SourceTooSmall { .. }) => {
            return Ok(SourceOutcome {
                rows: Vec::new(),
                planned: 0,
                skipped: Some(format!("source `{stem}` skipped: {e}")),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let planned = specs.len();

    let luma = mask_img.to_luma16();
    let mask = BinaryMask::new(
        luma.width(),
        luma.height(),
        luma.pixels().map(|p| p.0[0] != 0).collect(),
    )?;
    let mut masks = BTreeMap::new();
    masks.insert(stem.to_string(), mask);
    let retained = filter_windows(&specs, &masks, config.min_skeleton_length)?;

    for spec in &retained {
        let patch = image.crop_imm(spec.x, spec.y, spec.size, spec.size);
        patch.save_with_format(
            out.join(format!("{}.png", spec.patch_id())),
            image::ImageFormat::Png,
        )?;
        let mask_patch = mask_img.crop_imm(spec.x, spec.y, spec.size, spec.size);
        mask_patch.save_with_format(
            out.join("masks").join(format!("{}.png", spec.patch_id())),
            image::ImageFormat::Png,
        )?;
    }
    Ok(SourceOutcome {
        rows: retained,
        planned,
        skipped: None,
    })
}
