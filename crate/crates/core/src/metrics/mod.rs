//! Per-image feature metrics for vessel-style grayscale images.
//!
//! Four features characterize an image/mask pair: vessel-to-background
//! contrast, background Gaussian noise sigma, vessel density (medial-line
//! length per image area) and medial-line heterogeneity. Heterogeneity
//! correlates with the mean medial intensity, so a dataset-level linear
//! detrend ([`fit_detrend`] / [`detrend`]) produces the normalized value
//! actually used for sampling.

mod blur;
mod noise;
mod skeleton;

pub use blur::gaussian_blur;
pub use noise::{noise_sigma, MIN_COEFFICIENTS};
pub use skeleton::{skeletonize, Skeleton};

use serde::{Deserialize, Serialize};

use crate::image::{check_dims, BinaryMask, GrayImage};
use crate::math::mean_std;
use crate::{Error, Result};

/// Per-image metric values. `detrended_heterogeneity` is only filled after
/// a dataset-level detrend pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub contrast: f64,
    pub noise_sigma: f64,
    pub vessel_density: f64,
    pub heterogeneity: f64,
    pub mean_medial_intensity: f64,
    pub detrended_heterogeneity: Option<f64>,
}

/// Ratio of mean foreground intensity to mean background intensity.
pub fn contrast(image: &GrayImage, mask: &BinaryMask) -> Result<f64> {
    check_dims(image, mask)?;
    let mut fg_sum = 0.0;
    let mut fg_count = 0usize;
    let mut bg_sum = 0.0;
    let mut bg_count = 0usize;
    for (p, &is_fg) in image.pixels().iter().zip(mask.bits()) {
        if is_fg {
            fg_sum += p;
            fg_count += 1;
        } else {
            bg_sum += p;
            bg_count += 1;
        }
    }
    if fg_count == 0 {
        return Err(Error::EmptyRegion("foreground"));
    }
    if bg_count == 0 {
        return Err(Error::EmptyRegion("background"));
    }
    let bg_mean = bg_sum / bg_count as f64;
    if bg_mean == 0.0 {
        return Err(Error::UndefinedContrast);
    }
    Ok((fg_sum / fg_count as f64) / bg_mean)
}

/// Medial-line length divided by image area (in pixels squared).
pub fn vessel_density(skeleton: &Skeleton, image_area: usize) -> f64 {
    skeleton.arc_length / image_area as f64
}

/// Heterogeneity `h` (population std of blurred intensities along the
/// medial line) and mean medial intensity `m`. The image is blurred with a
/// unit-sigma Gaussian first to suppress extreme values.
pub fn medial_heterogeneity(image: &GrayImage, skeleton: &Skeleton) -> Result<(f64, f64)> {
    if skeleton.is_empty() {
        return Err(Error::NoMedialLine);
    }
    let blurred = gaussian_blur(image, 1.0);
    medial_stats(&blurred, skeleton)
}

/// As `medial_heterogeneity` but over an already-blurred image, so a batch
/// caller can blur once.
fn medial_stats(blurred: &GrayImage, skeleton: &Skeleton) -> Result<(f64, f64)> {
    if skeleton.is_empty() {
        return Err(Error::NoMedialLine);
    }
    let values: Vec<f64> = skeleton.pixels.iter().map(|&(x, y)| blurred.get(x, y)).collect();
    let (m, h) = mean_std(&values);
    Ok((h, m))
}

/// Linear model `expected_h = slope * m + intercept` fitted over a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetrendModel {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares fit of `h` against `m` over `(m, h)` pairs.
pub fn fit_detrend(points: &[(f64, f64)]) -> Result<DetrendModel> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit("need at least 2 points"));
    }
    let n = points.len() as f64;
    let mean_m = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_h = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut var_m = 0.0;
    let mut cov = 0.0;
    for &(m, h) in points {
        var_m += (m - mean_m) * (m - mean_m);
        cov += (m - mean_m) * (h - mean_h);
    }
    let threshold = n * f64::EPSILON * mean_m.abs().max(1.0);
    if var_m.sqrt() / n.sqrt() <= threshold {
        return Err(Error::DegenerateFit("all mean intensities are equal"));
    }
    let slope = cov / var_m;
    Ok(DetrendModel {
        slope,
        intercept: mean_h - slope * mean_m,
    })
}

/// Residual heterogeneity after removing the fitted linear trend.
pub fn detrend(h: f64, m: f64, model: &DetrendModel) -> f64 {
    h - (model.slope * m + model.intercept)
}

/// Outcome of the metric pass on one image, field by field. Vessel density
/// never fails (an empty skeleton simply has zero length), the other metrics
/// carry their own preconditions.
#[derive(Debug)]
pub struct MetricReport {
    pub contrast: Result<f64>,
    pub noise_sigma: Result<f64>,
    pub vessel_density: f64,
    /// `(h, m)` from the medial line.
    pub medial: Result<(f64, f64)>,
}

impl MetricReport {
    /// Collapse into a [`MetricVector`], propagating the first failed field.
    pub fn into_vector(self) -> Result<MetricVector> {
        let (heterogeneity, mean_medial_intensity) = self.medial?;
        Ok(MetricVector {
            contrast: self.contrast?,
            noise_sigma: self.noise_sigma?,
            vessel_density: self.vessel_density,
            heterogeneity,
            mean_medial_intensity,
            detrended_heterogeneity: None,
        })
    }
}

/// Compute all per-image metrics for one image/mask pair.
pub fn extract_metrics(image: &GrayImage, mask: &BinaryMask) -> Result<MetricReport> {
    check_dims(image, mask)?;
    let skeleton = skeletonize(mask);
    let medial = if skeleton.is_empty() {
        Err(Error::NoMedialLine)
    } else {
        let blurred = gaussian_blur(image, 1.0);
        medial_stats(&blurred, &skeleton)
    };
    Ok(MetricReport {
        contrast: contrast(image, mask),
        noise_sigma: noise_sigma(image, mask),
        vessel_density: vessel_density(&skeleton, image.area()),
        medial,
    })
}
