//! Background noise sigma estimation.
//!
//! One-level 2-d Haar transform; the estimator is the median absolute
//! deviation of the diagonal-detail coefficients divided by 0.6745 (the
//! Gaussian consistency constant). Only coefficients whose 2x2 support lies
//! entirely in the background are used, so vessel structure never leaks into
//! the estimate. Odd image sizes drop the last row/column.

use crate::image::{check_dims, BinaryMask, GrayImage};
use crate::math::median;
use crate::{Error, Result};

/// Minimum number of background-only detail coefficients for a meaningful
/// estimate.
pub const MIN_COEFFICIENTS: usize = 100;

const MAD_TO_SIGMA: f64 = 0.6745;

/// Diagonal-detail (HH) Haar coefficients over background-only 2x2 blocks.
fn background_detail_coefficients(image: &GrayImage, mask: &BinaryMask) -> Vec<f64> {
    let mut coeffs = Vec::new();
    for by in 0..image.height() / 2 {
        for bx in 0..image.width() / 2 {
            let (x, y) = (bx * 2, by * 2);
            let background = !mask.get(x, y)
                && !mask.get(x + 1, y)
                && !mask.get(x, y + 1)
                && !mask.get(x + 1, y + 1);
            if background {
                let hh = (image.get(x, y) - image.get(x + 1, y) - image.get(x, y + 1)
                    + image.get(x + 1, y + 1))
                    / 2.0;
                coeffs.push(hh);
            }
        }
    }
    coeffs
}

/// Estimate the standard deviation of additive Gaussian noise from the
/// background of the image.
pub fn noise_sigma(image: &GrayImage, mask: &BinaryMask) -> Result<f64> {
    check_dims(image, mask)?;
    let coeffs = background_detail_coefficients(image, mask);
    if coeffs.len() < MIN_COEFFICIENTS {
        return Err(Error::InsufficientBackground {
            got: coeffs.len(),
            need: MIN_COEFFICIENTS,
        });
    }
    let center = median(&coeffs);
    let deviations: Vec<f64> = coeffs.iter().map(|c| (c - center).abs()).collect();
    Ok(median(&deviations) / MAD_TO_SIGMA)
}
