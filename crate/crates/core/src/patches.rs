//! Seven-window patch extraction protocol.
//!
//! Each source image yields seven square windows: the four corners, the
//! center, and two uniformly random positions (which may overlap the fixed
//! five). Windows without enough vessel content, measured as in-window
//! medial-line arc length, are dropped.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::image::BinaryMask;
use crate::metrics::skeletonize;
use crate::rng::{derive_seed, fnv1a};
use crate::{Error, Result};

/// Default minimum in-window medial-line arc length for a window to be kept.
pub const DEFAULT_MIN_SKELETON_LENGTH: f64 = 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    CornerTl,
    CornerTr,
    CornerBl,
    CornerBr,
    Center,
    Random1,
    Random2,
}

impl WindowKind {
    pub const ALL: [WindowKind; 7] = [
        WindowKind::CornerTl,
        WindowKind::CornerTr,
        WindowKind::CornerBl,
        WindowKind::CornerBr,
        WindowKind::Center,
        WindowKind::Random1,
        WindowKind::Random2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            WindowKind::CornerTl => "corner-tl",
            WindowKind::CornerTr => "corner-tr",
            WindowKind::CornerBl => "corner-bl",
            WindowKind::CornerBr => "corner-br",
            WindowKind::Center => "center",
            WindowKind::Random1 => "random-1",
            WindowKind::Random2 => "random-2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.as_str() == s)
    }
}

/// One planned window, fully inside its source image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchSpec {
    pub source_id: String,
    pub kind: WindowKind,
    /// Top-left corner in source pixels.
    pub x: u32,
    pub y: u32,
    pub size: u32,
}

impl PatchSpec {
    /// `{source_id}__{kind}`, also the patch image file stem.
    pub fn patch_id(&self) -> String {
        format!("{}__{}", self.source_id, self.kind.as_str())
    }
}

/// Plan the seven windows for one source image.
///
/// Corner and center positions are pure functions of the geometry; the two
/// random windows are drawn uniformly over all valid top-left positions from
/// a stream seeded by `(seed, source_id)`, so plans are reproducible per
/// source regardless of processing order.
pub fn plan_windows(
    source_id: &str,
    source_width: u32,
    source_height: u32,
    size: u32,
    seed: u64,
) -> Result<Vec<PatchSpec>> {
    if source_width < size || source_height < size {
        return Err(Error::SourceTooSmall {
            width: source_width,
            height: source_height,
            size,
        });
    }
    let xmax = source_width - size;
    let ymax = source_height - size;
    let spec = |kind, x, y| PatchSpec {
        source_id: source_id.to_string(),
        kind,
        x,
        y,
        size,
    };
    let mut rng = StdRng::seed_from_u64(derive_seed(seed, fnv1a(source_id.as_bytes())));
    let mut random_spec = |kind| {
        let x = rng.random_range(0..=xmax);
        let y = rng.random_range(0..=ymax);
        spec(kind, x, y)
    };
    Ok(vec![
        spec(WindowKind::CornerTl, 0, 0),
        spec(WindowKind::CornerTr, xmax, 0),
        spec(WindowKind::CornerBl, 0, ymax),
        spec(WindowKind::CornerBr, xmax, ymax),
        spec(WindowKind::Center, xmax / 2, ymax / 2),
        random_spec(WindowKind::Random1),
        random_spec(WindowKind::Random2),
    ])
}

/// In-window medial-line arc length used by the filter.
pub fn window_skeleton_length(spec: &PatchSpec, mask: &BinaryMask) -> Result<f64> {
    let window = mask.crop(spec.x, spec.y, spec.size, spec.size)?;
    Ok(skeletonize(&window).arc_length)
}

/// Keep the windows whose in-window skeleton arc length reaches
/// `min_skeleton_length`. Order is preserved; retaining zero windows is not
/// an error.
pub fn filter_windows(
    specs: &[PatchSpec],
    masks: &BTreeMap<String, BinaryMask>,
    min_skeleton_length: f64,
) -> Result<Vec<PatchSpec>> {
    let mut retained = Vec::with_capacity(specs.len());
    for spec in specs {
        let mask = masks
            .get(&spec.source_id)
            .ok_or_else(|| Error::MissingMask(spec.source_id.clone()))?;
        if window_skeleton_length(spec, mask)? >= min_skeleton_length {
            retained.push(spec.clone());
        }
    }
    Ok(retained)
}
