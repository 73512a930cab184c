//! Heterogeneous subset selection over feature-mapped datasets.
//!
//! Given a dataset mapped to an `n x d` feature matrix, the crate selects a
//! subset of `k` samples that covers the occupied region of the feature space
//! as uniformly as possible, instead of following the data density. The
//! pipeline is:
//!
//! 1. z-score normalize the feature matrix ([`feature_space::fit_zscore`],
//!    [`feature_space::apply_zscore`]),
//! 2. snap every sample to an integer grid with cell size `nu`
//!    ([`feature_space::discretize`]),
//! 3. dilate the occupied cells with a discrete hypersphere of radius `r`
//!    to estimate the feasible region ([`sampling::dilate`]),
//! 4. repeatedly draw `k` points uniformly from that region, map each drawn
//!    point to its nearest data sample, and keep the candidate subset with
//!    the smallest farthest-unselected-sample distance (FUS)
//!    ([`sampling::select`]).
//!
//! The [`metrics`] module computes the image features used to map grayscale
//! vessel images (contrast, background noise sigma, vessel density, medial
//! line heterogeneity), [`patches`] implements the seven-window extraction
//! protocol, and [`diagnostics`] produces histogram / PCA / coverage reports
//! for inspecting a selection.
//!
//! All randomness flows from a single master seed; results are bit-identical
//! for a fixed seed regardless of thread count (see [`rng`] and [`exec`]).

// index loops over dimension-strided buffers read closer to the math than
// zip chains would
#![allow(clippy::needless_range_loop)]

pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod feature_space;
pub mod image;
pub mod metrics;
pub mod patches;
pub mod rng;
pub mod sampling;

mod math;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
