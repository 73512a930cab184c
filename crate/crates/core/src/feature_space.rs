//! Feature matrix handling: z-score normalization and grid discretization.
//!
//! A [`FeatureMatrix`] holds the mapped dataset, one row per sample. After
//! normalization ([`fit_zscore`] / [`apply_zscore`]) the matrix is snapped to
//! an integer lattice by [`discretize`]: `lattice = floor(values / cell_size)`
//! elementwise. Multiple samples landing in the same cell is expected and is
//! what later allows uniform coverage of the occupied region.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Column name the loader treats as the per-row error marker rather than a
/// feature. Rows with a non-empty value in this column are skipped on load.
pub const ERROR_COLUMN: &str = "error";

/// An `n x d` real-valued dataset with per-sample ids and optional group ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    ids: Vec<String>,
    groups: Option<Vec<String>>,
    feature_names: Vec<String>,
    /// Row-major `n * d` values.
    values: Vec<f64>,
}

impl FeatureMatrix {
    /// Build a matrix, validating the type invariants: unique ids, matching
    /// lengths, and finite values (non-finite input is an error, never
    /// silently imputed).
    pub fn new(
        ids: Vec<String>,
        groups: Option<Vec<String>>,
        feature_names: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let n = ids.len();
        let d = feature_names.len();
        if values.len() != n * d {
            return Err(Error::DimensionMismatch {
                expected: n * d,
                got: values.len(),
            });
        }
        if let Some(g) = &groups {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    column: feature_names[i % d].clone(),
                    row: i / d,
                });
            }
        }
        Ok(Self {
            ids,
            groups,
            feature_names,
            values,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.ids.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn groups(&self) -> Option<&[String]> {
        self.groups.as_deref()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_features();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of a sample id, if present.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Project onto the named feature columns, in the given order.
    pub fn with_features(&self, names: &[String]) -> Result<Self> {
        let mut cols = Vec::with_capacity(names.len());
        for name in names {
            let j = self
                .feature_names
                .iter()
                .position(|f| f == name)
                .ok_or_else(|| Error::UnknownFeature(name.clone()))?;
            cols.push(j);
        }
        let d = self.n_features();
        let mut values = Vec::with_capacity(self.n_samples() * cols.len());
        for i in 0..self.n_samples() {
            for &j in &cols {
                values.push(self.values[i * d + j]);
            }
        }
        FeatureMatrix::new(self.ids.clone(), self.groups.clone(), names.to_vec(), values)
    }

    /// Read a feature CSV: header row, column 1 `id`, an optional group
    /// column (matched by name), remaining columns real-valued features.
    /// A column named [`ERROR_COLUMN`] is not a feature; rows with a
    /// non-empty error value are skipped and reported in the returned list.
    pub fn from_csv<R: Read>(reader: R, group_column: &str) -> Result<(Self, Vec<String>)> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.is_empty() || &headers[0] != "id" {
            return Err(Error::CsvFormat(
                "first column of a feature CSV must be `id`".into(),
            ));
        }
        let mut group_idx = None;
        let mut error_idx = None;
        let mut feature_cols = Vec::new();
        let mut feature_names = Vec::new();
        for (j, name) in headers.iter().enumerate().skip(1) {
            if name == group_column {
                group_idx = Some(j);
            } else if name == ERROR_COLUMN {
                error_idx = Some(j);
            } else {
                feature_cols.push(j);
                feature_names.push(name.to_string());
            }
        }
        let mut ids = Vec::new();
        let mut groups = group_idx.map(|_| Vec::new());
        let mut values = Vec::new();
        let mut skipped = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if let Some(e) = error_idx {
                if !record.get(e).unwrap_or("").is_empty() {
                    skipped.push(format!(
                        "row {} (id `{}`): {}",
                        row,
                        record.get(0).unwrap_or("?"),
                        record.get(e).unwrap_or("")
                    ));
                    continue;
                }
            }
            ids.push(
                record
                    .get(0)
                    .ok_or_else(|| Error::CsvFormat(format!("row {row}: missing id")))?
                    .to_string(),
            );
            if let (Some(g), Some(j)) = (groups.as_mut(), group_idx) {
                g.push(record.get(j).unwrap_or("").to_string());
            }
            for (&j, name) in feature_cols.iter().zip(&feature_names) {
                let raw = record.get(j).ok_or_else(|| {
                    Error::CsvFormat(format!("row {row}: missing column `{name}`"))
                })?;
                let v: f64 = raw.trim().parse().map_err(|_| {
                    Error::CsvFormat(format!("row {row}, column `{name}`: cannot parse `{raw}`"))
                })?;
                values.push(v);
            }
        }
        let matrix = FeatureMatrix::new(ids, groups, feature_names, values)?;
        Ok((matrix, skipped))
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P, group_column: &str) -> Result<(Self, Vec<String>)> {
        let file = std::fs::File::open(path)?;
        Self::from_csv(std::io::BufReader::new(file), group_column)
    }

    /// Write the matrix back out in the feature CSV format.
    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["id".to_string()];
        if self.groups.is_some() {
            header.push("group".to_string());
        }
        header.extend(self.feature_names.iter().cloned());
        wtr.write_record(&header)?;
        for i in 0..self.n_samples() {
            let mut record = vec![self.ids[i].clone()];
            if let Some(g) = &self.groups {
                record.push(g[i].clone());
            }
            record.extend(self.row(i).iter().map(|v| v.to_string()));
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Per-feature z-score parameters fitted on a matrix.
///
/// Uses the population convention (divide by `n`). Features whose standard
/// deviation is numerically zero are recorded in `dropped_features` and
/// excluded from all downstream geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationModel {
    feature_names: Vec<String>,
    means: Vec<f64>,
    stds: Vec<f64>,
    dropped_features: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    feature_names: Vec<String>,
    means: Vec<f64>,
    stds: Vec<f64>,
    dropped_features: Vec<String>,
}

impl NormalizationModel {
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    /// Indices (into `feature_names`) of dropped zero-variance features.
    pub fn dropped_features(&self) -> &[usize] {
        &self.dropped_features
    }

    pub fn dropped_feature_names(&self) -> Vec<String> {
        self.dropped_features
            .iter()
            .map(|&j| self.feature_names[j].clone())
            .collect()
    }

    /// One human-readable warning per dropped feature.
    pub fn warnings(&self) -> Vec<String> {
        self.dropped_features
            .iter()
            .map(|&j| format!("feature `{}` has zero variance and was dropped", self.feature_names[j]))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            feature_names: self.feature_names.clone(),
            means: self.means.clone(),
            stds: self.stds.clone(),
            dropped_features: self.dropped_feature_names(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(json)?;
        let dropped = file
            .dropped_features
            .iter()
            .map(|name| {
                file.feature_names
                    .iter()
                    .position(|f| f == name)
                    .ok_or_else(|| Error::UnknownFeature(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            feature_names: file.feature_names,
            means: file.means,
            stds: file.stds,
            dropped_features: dropped,
        })
    }
}

/// A constant column stored in decimal (e.g. repeated `0.1`) accumulates
/// rounding in the mean, so "zero variance" is detected with a scale- and
/// size-aware threshold rather than an exact compare.
fn zero_std_threshold(n: usize, mean: f64) -> f64 {
    n as f64 * f64::EPSILON * mean.abs().max(1.0)
}

/// Fit per-column population mean/std. Zero-variance columns are dropped
/// (recorded in the model) rather than failing the run; if every column is
/// degenerate the feature space itself is unusable and an error is returned.
pub fn fit_zscore(matrix: &FeatureMatrix) -> Result<NormalizationModel> {
    let n = matrix.n_samples();
    if n < 2 {
        return Err(Error::TooFewRows { need: 2, got: n });
    }
    let d = matrix.n_features();
    let mut means = vec![0.0; d];
    for i in 0..n {
        for (j, v) in matrix.row(i).iter().enumerate() {
            means[j] += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut stds = vec![0.0; d];
    for i in 0..n {
        for (j, v) in matrix.row(i).iter().enumerate() {
            let dv = v - means[j];
            stds[j] += dv * dv;
        }
    }
    let mut dropped = Vec::new();
    for (j, s) in stds.iter_mut().enumerate() {
        *s = (*s / n as f64).sqrt();
        if *s <= zero_std_threshold(n, means[j]) {
            dropped.push(j);
        }
    }
    if dropped.len() == d {
        return Err(Error::DegenerateFeatureSpace);
    }
    Ok(NormalizationModel {
        feature_names: matrix.feature_names().to_vec(),
        means,
        stds,
        dropped_features: dropped,
    })
}

/// Apply a fitted model: subtract mean, divide by std per retained column;
/// dropped columns are removed from the output.
pub fn apply_zscore(matrix: &FeatureMatrix, model: &NormalizationModel) -> Result<FeatureMatrix> {
    if matrix.feature_names() != model.feature_names() {
        return Err(Error::FeatureNamesMismatch);
    }
    let d = matrix.n_features();
    let dropped: HashSet<usize> = model.dropped_features.iter().copied().collect();
    let retained: Vec<usize> = (0..d).filter(|j| !dropped.contains(j)).collect();
    let names: Vec<String> = retained
        .iter()
        .map(|&j| model.feature_names[j].clone())
        .collect();
    let mut values = Vec::with_capacity(matrix.n_samples() * retained.len());
    for i in 0..matrix.n_samples() {
        let row = matrix.row(i);
        for &j in &retained {
            values.push((row[j] - model.means[j]) / model.stds[j]);
        }
    }
    FeatureMatrix::new(matrix.ids.clone(), matrix.groups.clone(), names, values)
}

/// Grid cell size in (normalized) feature units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub cell_size: f64,
}

impl GridConfig {
    pub fn new(cell_size: f64) -> Result<Self> {
        if !cell_size.is_finite() || cell_size <= 0.0 {
            return Err(Error::InvalidCellSize(cell_size));
        }
        Ok(Self { cell_size })
    }
}

/// Discretized dataset: integer lattice coordinates plus the continuous
/// grid-scaled coordinates they were floored from. Row `i` corresponds to
/// row `i` of the source [`FeatureMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridPointSet {
    config: GridConfig,
    dim: usize,
    /// Row-major `n * dim` lattice coordinates.
    lattice: Vec<i64>,
    /// Row-major `n * dim` pre-floor coordinates (`values / cell_size`).
    scaled: Vec<f64>,
}

impl GridPointSet {
    pub fn n_samples(&self) -> usize {
        self.lattice.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn config(&self) -> GridConfig {
        self.config
    }

    pub fn lattice_row(&self, i: usize) -> &[i64] {
        &self.lattice[i * self.dim..(i + 1) * self.dim]
    }

    pub fn scaled_row(&self, i: usize) -> &[f64] {
        &self.scaled[i * self.dim..(i + 1) * self.dim]
    }

    pub fn scaled(&self) -> &[f64] {
        &self.scaled
    }

    /// Distinct occupied lattice cells, lexicographically sorted.
    pub fn distinct_cells(&self) -> Vec<Vec<i64>> {
        let mut cells: Vec<Vec<i64>> = (0..self.n_samples())
            .map(|i| self.lattice_row(i).to_vec())
            .collect();
        cells.sort_unstable();
        cells.dedup();
        cells
    }
}

/// Snap every sample to the integer grid: `scaled = values / cell_size`,
/// `lattice = floor(scaled)` elementwise. Lattice values may be negative;
/// row order is preserved.
pub fn discretize(matrix: &FeatureMatrix, grid: &GridConfig) -> GridPointSet {
    let scaled: Vec<f64> = matrix.values().iter().map(|v| v / grid.cell_size).collect();
    let lattice: Vec<i64> = scaled.iter().map(|s| s.floor() as i64).collect();
    GridPointSet {
        config: *grid,
        dim: matrix.n_features(),
        lattice,
        scaled,
    }
}
