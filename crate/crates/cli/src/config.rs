//! Run configuration: defaults, config-file merging and the metadata block
//! embedded in every output artifact.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The fully resolved configuration, serialized verbatim into every output's
/// metadata block. Two runs with equal config and inputs produce
/// byte-identical artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub cell_size: f64,
    pub radius: f64,
    pub k: usize,
    pub n_trials: usize,
    pub seed: u64,
    pub group_column: String,
    pub group_exclusion: bool,
    pub bins: usize,
    pub window_size: u32,
    pub min_skeleton_length: f64,
    /// Execution detail, not provenance: outputs are independent of thread
    /// count by contract, so the field never reaches serialized artifacts.
    #[serde(skip)]
    pub threads: Option<usize>,
    pub feature_columns: Option<Vec<String>>,
    /// Input/output paths of the invoked command, by role.
    pub paths: BTreeMap<String, String>,
}

/// Command-line options shared by every subcommand. Values resolve as:
/// explicit flag, then config file, then built-in default.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonOpts {
    /// TOML config file; explicit flags win over file values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Grid cell size in normalized feature units.
    #[arg(long, value_name = "NU")]
    pub cell_size: Option<f64>,

    /// Hypersphere radius in grid units.
    #[arg(long, value_name = "R")]
    pub radius: Option<f64>,

    /// Subset size.
    #[arg(long, value_name = "K")]
    pub k: Option<usize>,

    /// Number of sampling trials to minimize FUS over.
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,

    /// Master seed; all randomness derives from it.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Name of the group column in feature CSVs.
    #[arg(long, value_name = "NAME")]
    pub group_column: Option<String>,

    /// Forbid selecting two samples from the same group.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub group_exclusion: Option<bool>,

    /// Histogram bin count.
    #[arg(long, value_name = "B")]
    pub bins: Option<usize>,

    /// Patch window size in pixels.
    #[arg(long, value_name = "PX")]
    pub window_size: Option<u32>,

    /// Minimum in-window medial-line arc length for a window to be kept.
    #[arg(long, value_name = "LEN")]
    pub min_skeleton_length: Option<f64>,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, value_name = "T")]
    pub threads: Option<usize>,

    /// Comma-separated feature columns to sample on (default: all).
    #[arg(long, value_delimiter = ',', value_name = "COLS")]
    pub feature_columns: Option<Vec<String>>,
}

/// Optional TOML config file with the same fields as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub cell_size: Option<f64>,
    pub radius: Option<f64>,
    pub k: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub group_column: Option<String>,
    pub group_exclusion: Option<bool>,
    pub bins: Option<usize>,
    pub window_size: Option<u32>,
    pub min_skeleton_length: Option<f64>,
    pub threads: Option<usize>,
    pub feature_columns: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config `{}`: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::input(format!("invalid config `{}`: {e}", path.display())))
    }
}

impl CommonOpts {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let config = RunConfig {
            cell_size: self.cell_size.or(file.cell_size).unwrap_or(0.1),
            radius: self.radius.or(file.radius).unwrap_or(4.0),
            k: self.k.or(file.k).unwrap_or(100),
            n_trials: self.trials.or(file.trials).unwrap_or(1000),
            seed: self.seed.or(file.seed).unwrap_or(42),
            group_column: self
                .group_column
                .clone()
                .or(file.group_column)
                .unwrap_or_else(|| "group".to_string()),
            group_exclusion: self.group_exclusion.or(file.group_exclusion).unwrap_or(false),
            bins: self.bins.or(file.bins).unwrap_or(20),
            window_size: self.window_size.or(file.window_size).unwrap_or(256),
            min_skeleton_length: self
                .min_skeleton_length
                .or(file.min_skeleton_length)
                .unwrap_or(hetsample::patches::DEFAULT_MIN_SKELETON_LENGTH),
            threads: self.threads.or(file.threads),
            feature_columns: self.feature_columns.clone().or(file.feature_columns),
            paths: BTreeMap::new(),
        };
        if config.cell_size <= 0.0 || !config.cell_size.is_finite() {
            return Err(CliError::config(format!("invalid cell size {}", config.cell_size)));
        }
        if config.radius <= 0.0 || !config.radius.is_finite() {
            return Err(CliError::config(format!("invalid radius {}", config.radius)));
        }
        if config.k == 0 || config.n_trials == 0 || config.bins == 0 || config.window_size == 0 {
            return Err(CliError::config("k, trials, bins and window size must be >= 1".into()));
        }
        Ok(config)
    }
}

/// Install the global rayon pool when a thread count was requested. Safe to
/// call once per process; later calls are ignored.
pub fn init_threads(config: &RunConfig) {
    if let Some(threads) = config.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

/// Metadata block written next to (or inside) every artifact.
#[derive(Debug, Serialize)]
pub struct Meta<'a, T: Serialize> {
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub summary: T,
}

pub fn write_meta<T: Serialize>(path: &Path, meta: &Meta<'_, T>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(meta)
        .map_err(|e| CliError::input(format!("serializing metadata: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::input(format!("writing `{}`: {e}", path.display())))?;
    Ok(())
}
