//! Selection diagnostics: histogram comparisons, 2-d PCA projections and
//! coverage reports.

use serde::{Deserialize, Serialize};

use crate::feature_space::{FeatureMatrix, GridPointSet};
use crate::math::symmetric_eigen;
use crate::sampling::{nearest_selected_distances, KdTree, SelectionResult};
use crate::{Error, Result};

/// Normalized per-feature histograms of the full data and a subset, binned
/// on the full data's range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramPair {
    pub feature_name: String,
    /// `bins + 1` strictly increasing edges.
    pub bin_edges: Vec<f64>,
    /// Frequencies normalized by their own sum.
    pub full_freq: Vec<f64>,
    pub subset_freq: Vec<f64>,
}

/// Equal-width histogram pair over the full data's `[min, max]` range.
/// Values equal to the maximum fall in the last bin; each series is
/// normalized by its own sum. A constant full column degenerates to a
/// single bin with frequency 1.
pub fn histogram_pair(
    full: &[f64],
    subset: &[f64],
    bins: usize,
    feature_name: &str,
) -> Result<HistogramPair> {
    if bins == 0 {
        return Err(Error::InvalidBins);
    }
    if full.is_empty() {
        return Err(Error::Infeasible("histogram needs non-empty full data".into()));
    }
    let min = full.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = full.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(HistogramPair {
            feature_name: feature_name.to_string(),
            bin_edges: vec![min, min + 1.0],
            full_freq: vec![1.0],
            subset_freq: vec![if subset.is_empty() { 0.0 } else { 1.0 }],
        });
    }
    let width = (max - min) / bins as f64;
    let mut bin_edges: Vec<f64> = (0..=bins)
        .map(|i| min + (max - min) * i as f64 / bins as f64)
        .collect();
    bin_edges[0] = min;
    bin_edges[bins] = max;
    let bin_of = |v: f64| -> usize {
        let idx = ((v - min) / width).floor() as i64;
        idx.clamp(0, bins as i64 - 1) as usize
    };
    let count = |values: &[f64]| -> Vec<f64> {
        let mut freq = vec![0.0; bins];
        for &v in values {
            freq[bin_of(v)] += 1.0;
        }
        let total: f64 = freq.iter().sum();
        if total > 0.0 {
            for f in &mut freq {
                *f /= total;
            }
        }
        freq
    };
    Ok(HistogramPair {
        feature_name: feature_name.to_string(),
        bin_edges,
        full_freq: count(full),
        subset_freq: count(subset),
    })
}

/// Shannon entropy (nats) of a normalized frequency vector.
pub fn entropy(freq: &[f64]) -> f64 {
    freq.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Top-2 principal component projection of a (z-scored) matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaProjection {
    /// Two orthonormal rows of length `d`.
    pub components: Vec<Vec<f64>>,
    /// Eigenvalues of the covariance for the two components, descending.
    pub explained_variance: Vec<f64>,
    /// `n x 2` projected coordinates.
    pub coords: Vec<[f64; 2]>,
    /// Marks rows whose id is in the selected set.
    pub selected_flags: Vec<bool>,
}

/// Project onto the top-2 eigenvectors of the population covariance.
///
/// Sign convention: the largest-magnitude entry of each component is made
/// positive, so plots are reproducible. `selected_ids` must all exist in the
/// matrix.
pub fn pca_project(matrix: &FeatureMatrix, selected_ids: &[String]) -> Result<PcaProjection> {
    let n = matrix.n_samples();
    let d = matrix.n_features();
    if n < 3 || d < 2 {
        return Err(Error::PcaTooSmall { n, d });
    }
    let mut selected_flags = vec![false; n];
    for id in selected_ids {
        let idx = matrix
            .index_of(id)
            .ok_or_else(|| Error::UnknownId(id.clone()))?;
        selected_flags[idx] = true;
    }
    let mut means = vec![0.0; d];
    for i in 0..n {
        for (j, v) in matrix.row(i).iter().enumerate() {
            means[j] += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut cov = vec![vec![0.0; d]; d];
    for i in 0..n {
        let row = matrix.row(i);
        for a in 0..d {
            let da = row[a] - means[a];
            for b in a..d {
                cov[a][b] += da * (row[b] - means[b]);
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            cov[a][b] /= n as f64;
            cov[b][a] = cov[a][b];
        }
    }
    if cov.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteCovariance);
    }
    let (eigenvalues, eigenvectors) = symmetric_eigen(&cov);
    let mut components: Vec<Vec<f64>> = eigenvectors.into_iter().take(2).collect();
    for component in &mut components {
        let lead = component
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap().then(b.0.cmp(&a.0)))
            .map(|(_, v)| *v)
            .unwrap_or(0.0);
        if lead < 0.0 {
            for v in component.iter_mut() {
                *v = -*v;
            }
        }
    }
    let coords: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let row = matrix.row(i);
            let mut c = [0.0f64; 2];
            for (k, component) in components.iter().enumerate() {
                c[k] = row
                    .iter()
                    .zip(component)
                    .zip(&means)
                    .map(|((v, w), m)| (v - m) * w)
                    .sum();
            }
            c
        })
        .collect();
    Ok(PcaProjection {
        components,
        explained_variance: eigenvalues.into_iter().take(2).collect(),
        coords,
        selected_flags,
    })
}

/// Distance quantiles over the unselected samples (nearest-rank convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceQuantiles {
    pub p50: f64,
    pub p90: f64,
    pub p100: f64,
}

/// Coverage summary of a selection over its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub fus: f64,
    pub distance_quantiles: DistanceQuantiles,
    /// Distinct occupied lattice cells.
    pub total_cells: usize,
    /// Cells within `radius` (lattice units) of a selected sample.
    pub covered_cells: usize,
    pub radius: f64,
}

/// Package FUS, nearest-distance quantiles and occupied-cell coverage within
/// `radius` of the selection.
pub fn coverage_report(
    result: &SelectionResult,
    matrix: &FeatureMatrix,
    grid: &GridPointSet,
    radius: f64,
) -> Result<CoverageReport> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidRadius(radius));
    }
    let selected: Vec<usize> = result
        .selected_ids
        .iter()
        .map(|id| matrix.index_of(id).ok_or_else(|| Error::UnknownId(id.clone())))
        .collect::<Result<_>>()?;
    let distances = nearest_selected_distances(&selected, grid)?;
    let mut sorted: Vec<f64> = distances.iter().map(|d| d.1).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantile = |p: f64| -> f64 {
        if sorted.is_empty() {
            0.0
        } else {
            let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
            sorted[rank.clamp(1, sorted.len()) - 1]
        }
    };
    let fus = sorted.last().copied().unwrap_or(0.0);

    let cells = grid.distinct_cells();
    let dim = grid.dim();
    let mut selected_coords = Vec::with_capacity(selected.len() * dim);
    for &i in &selected {
        selected_coords.extend(grid.lattice_row(i).iter().map(|&c| c as f64));
    }
    let tree = KdTree::new(&selected_coords, dim);
    let r2 = radius * radius;
    let mut covered = 0usize;
    let mut query = vec![0.0; dim];
    for cell in &cells {
        for (q, &c) in query.iter_mut().zip(cell) {
            *q = c as f64;
        }
        let (_, d2) = tree.nearest(&query).expect("selection is non-empty");
        if d2 <= r2 {
            covered += 1;
        }
    }
    Ok(CoverageReport {
        fus,
        distance_quantiles: DistanceQuantiles {
            p50: quantile(50.0),
            p90: quantile(90.0),
            p100: quantile(100.0),
        },
        total_cells: cells.len(),
        covered_cells: covered,
        radius,
    })
}

/// Self-contained SVG scatter of a PCA projection; selected samples are
/// drawn over the rest in a contrasting color.
pub fn pca_svg(projection: &PcaProjection) -> String {
    const SIZE: f64 = 640.0;
    const MARGIN: f64 = 40.0;
    let xs: Vec<f64> = projection.coords.iter().map(|c| c[0]).collect();
    let ys: Vec<f64> = projection.coords.iter().map(|c| c[1]).collect();
    let (xmin, xmax) = bounds(&xs);
    let (ymin, ymax) = bounds(&ys);
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let sx = (SIZE - 2.0 * MARGIN) / span(xmin, xmax);
    let sy = (SIZE - 2.0 * MARGIN) / span(ymin, ymax);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = SIZE
    ));
    svg.push_str(&format!(
        "<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n",
        s = SIZE
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\">pc1 vs pc2 ({} samples, {} selected)</text>\n",
        MARGIN,
        MARGIN / 2.0 + 5.0,
        projection.coords.len(),
        projection.selected_flags.iter().filter(|&&s| s).count()
    ));
    let place = |c: &[f64; 2]| -> (f64, f64) {
        (
            MARGIN + (c[0] - xmin) * sx,
            // SVG y axis points down
            SIZE - MARGIN - (c[1] - ymin) * sy,
        )
    };
    for (c, &sel) in projection.coords.iter().zip(&projection.selected_flags) {
        if !sel {
            let (x, y) = place(c);
            svg.push_str(&format!(
                "<circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"2\" fill=\"#9aa7b0\" fill-opacity=\"0.7\"/>\n"
            ));
        }
    }
    for (c, &sel) in projection.coords.iter().zip(&projection.selected_flags) {
        if sel {
            let (x, y) = place(c);
            svg.push_str(&format!(
                "<circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"3.5\" fill=\"#d62728\"/>\n"
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
