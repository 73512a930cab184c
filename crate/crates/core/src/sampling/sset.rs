//! Sampling set construction by structuring-element dilation.

use std::collections::HashSet;

use super::element::StructuringElement;
use crate::feature_space::GridPointSet;
use crate::{Error, Result};

/// Deduplicated union of structuring-element translates centered on every
/// occupied lattice cell. Repeated-point multiplicities are discarded: the
/// set is sampled uniformly, so only membership matters.
///
/// Points are stored lexicographically sorted, which both canonicalizes the
/// set (dilation is parallelized) and fixes the indexing that the uniform
/// draw relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSet {
    dim: usize,
    /// Row-major `count * dim`, lexicographically sorted.
    points: Vec<i64>,
}

impl SamplingSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        if point.len() != self.dim {
            return false;
        }
        let n = self.len();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(point) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// Dilate the distinct occupied cells of `grid` with `element`.
///
/// Every source cell is itself a member (the element contains the zero
/// offset), so `D_grid` is always a subset of the result.
pub fn dilate(grid: &GridPointSet, element: &StructuringElement) -> Result<SamplingSet> {
    if grid.dim() != element.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: element.dim(),
        });
    }
    let cells = grid.distinct_cells();
    let union = translate_union(&cells, element);
    let mut rows: Vec<Vec<i64>> = union.into_iter().collect();
    rows.sort_unstable();
    let dim = grid.dim();
    let mut points = Vec::with_capacity(rows.len() * dim);
    for row in rows {
        points.extend_from_slice(&row);
    }
    Ok(SamplingSet { dim, points })
}

/// Sequential reference path; `dilate` delegates to it when the `parallel`
/// feature is disabled.
pub fn dilate_seq(grid: &GridPointSet, element: &StructuringElement) -> Result<SamplingSet> {
    if grid.dim() != element.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: element.dim(),
        });
    }
    let cells = grid.distinct_cells();
    let union = translate_union_seq(&cells, element);
    let mut rows: Vec<Vec<i64>> = union.into_iter().collect();
    rows.sort_unstable();
    let dim = grid.dim();
    let mut points = Vec::with_capacity(rows.len() * dim);
    for row in rows {
        points.extend_from_slice(&row);
    }
    Ok(SamplingSet { dim, points })
}

fn translate_cell(cell: &[i64], element: &StructuringElement, out: &mut HashSet<Vec<i64>>) {
    for offset in element.iter() {
        let translated: Vec<i64> = cell.iter().zip(offset).map(|(c, o)| c + o).collect();
        out.insert(translated);
    }
}

#[cfg(feature = "parallel")]
fn translate_union(cells: &[Vec<i64>], element: &StructuringElement) -> HashSet<Vec<i64>> {
    use rayon::prelude::*;
    cells
        .par_chunks(64.max(cells.len() / 256))
        .map(|chunk| {
            let mut local = HashSet::with_capacity(chunk.len() * element.len() / 2);
            for cell in chunk {
                translate_cell(cell, element, &mut local);
            }
            local
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        })
}

#[cfg(not(feature = "parallel"))]
fn translate_union(cells: &[Vec<i64>], element: &StructuringElement) -> HashSet<Vec<i64>> {
    translate_union_seq(cells, element)
}

fn translate_union_seq(cells: &[Vec<i64>], element: &StructuringElement) -> HashSet<Vec<i64>> {
    let mut out = HashSet::with_capacity(cells.len() * element.len() / 2);
    for cell in cells {
        translate_cell(cell, element, &mut out);
    }
    out
}
