//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate feature space: every feature has zero variance")]
    DegenerateFeatureSpace,

    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },

    #[error("feature names mismatch: model was fitted on different features")]
    FeatureNamesMismatch,

    #[error("unknown feature column `{0}`")]
    UnknownFeature(String),

    #[error("unknown sample id `{0}`")]
    UnknownId(String),

    #[error("duplicate sample id `{0}`")]
    DuplicateId(String),

    #[error("non-finite value in column `{column}` at row {row}")]
    NonFinite { column: String, row: usize },

    #[error("invalid cell size {0}: must be finite and > 0")]
    InvalidCellSize(f64),

    #[error("invalid radius {0}: must be finite and > 0")]
    InvalidRadius(f64),

    #[error("invalid dimension {0}: must be >= 1")]
    InvalidDimension(usize),

    #[error("structuring element too large: exceeds {cap} offsets for d={dim}, r={radius}")]
    ElementTooLarge { dim: usize, radius: f64, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("insufficient diversity for k: sampling set exhausted after {selected} of {k} unique samples")]
    InsufficientDiversity { selected: usize, k: usize },

    #[error("infeasible selection: {0}")]
    Infeasible(String),

    #[error("empty selection")]
    EmptySelection,

    #[error("mask has no {0} pixels")]
    EmptyRegion(&'static str),

    #[error("undefined contrast: background mean intensity is zero")]
    UndefinedContrast,

    #[error("insufficient background: {got} valid wavelet coefficients, need at least {need}")]
    InsufficientBackground { got: usize, need: usize },

    #[error("no medial line: skeleton is empty")]
    NoMedialLine,

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("source too small: {width}x{height} cannot fit a {size}x{size} window")]
    SourceTooSmall { width: u32, height: u32, size: u32 },

    #[error("no mask for source `{0}`")]
    MissingMask(String),

    #[error("image `{path}` has unsupported color type {color:?}: expected 8/16-bit grayscale")]
    UnsupportedColor { path: String, color: String },

    #[error("invalid image geometry: {0}")]
    InvalidImage(String),

    #[error("histogram needs at least 1 bin")]
    InvalidBins,

    #[error("PCA needs at least 3 samples and 2 features, got {n}x{d}")]
    PcaTooSmall { n: usize, d: usize },

    #[error("covariance matrix contains non-finite values")]
    NonFiniteCovariance,

    #[error("csv parse error: {0}")]
    CsvFormat(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by an infeasible or degenerate configuration
    /// rather than by unreadable input. The CLI maps these to exit code 2.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::DegenerateFeatureSpace
                | Error::TooFewRows { .. }
                | Error::FeatureNamesMismatch
                | Error::UnknownFeature(_)
                | Error::UnknownId(_)
                | Error::InvalidCellSize(_)
                | Error::InvalidRadius(_)
                | Error::InvalidDimension(_)
                | Error::ElementTooLarge { .. }
                | Error::DimensionMismatch { .. }
                | Error::InsufficientDiversity { .. }
                | Error::Infeasible(_)
                | Error::EmptySelection
                | Error::InvalidBins
                | Error::PcaTooSmall { .. }
                | Error::DegenerateFit(_)
        )
    }
}
