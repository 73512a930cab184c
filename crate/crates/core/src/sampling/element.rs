//! Discrete hypersphere structuring element.

use crate::{Error, Result};

/// Default cap on the offset count; guards against high-dimensional blowup.
pub const DEFAULT_OFFSET_CAP: usize = 10_000_000;

/// The set of integer offsets within Euclidean radius `r` of the origin,
/// i.e. the filled lattice ball used to dilate occupied grid cells.
///
/// Always contains the zero offset and is symmetric about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuringElement {
    dim: usize,
    radius: f64,
    /// Row-major `count * dim` offsets, lexicographically sorted.
    offsets: Vec<i64>,
}

impl StructuringElement {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.offsets.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offset(&self, i: usize) -> &[i64] {
        &self.offsets[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> {
        self.offsets.chunks_exact(self.dim)
    }
}

/// Enumerate every integer vector `o` with `||o||_2 <= r` in `d` dimensions.
///
/// The enumeration recurses dimension by dimension with a shrinking squared
/// radius budget, so the work is proportional to the ball volume rather than
/// the bounding box. Exceeding `DEFAULT_OFFSET_CAP` offsets is an error.
pub fn build_structuring_element(dim: usize, radius: f64) -> Result<StructuringElement> {
    build_structuring_element_capped(dim, radius, DEFAULT_OFFSET_CAP)
}

pub fn build_structuring_element_capped(
    dim: usize,
    radius: f64,
    cap: usize,
) -> Result<StructuringElement> {
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidRadius(radius));
    }
    let mut offsets = Vec::new();
    let mut prefix = vec![0i64; dim];
    enumerate(dim, radius * radius, 0, &mut prefix, &mut offsets, cap).map_err(|_| {
        Error::ElementTooLarge { dim, radius, cap }
    })?;
    Ok(StructuringElement {
        dim,
        radius,
        offsets,
    })
}

/// Depth-first enumeration; `budget` is the remaining squared radius.
/// Returns `Err(())` as soon as the cap is exceeded.
fn enumerate(
    dim: usize,
    budget: f64,
    depth: usize,
    prefix: &mut [i64],
    out: &mut Vec<i64>,
    cap: usize,
) -> std::result::Result<(), ()> {
    let bound = budget.sqrt().floor() as i64;
    for o in -bound..=bound {
        let used = (o * o) as f64;
        if used > budget {
            continue;
        }
        prefix[depth] = o;
        if depth + 1 == dim {
            if out.len() / dim >= cap {
                return Err(());
            }
            out.extend_from_slice(prefix);
        } else {
            enumerate(dim, budget - used, depth + 1, prefix, out, cap)?;
        }
    }
    Ok(())
}
