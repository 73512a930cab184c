//! Farthest Unselected Sample (FUS) metric.
//!
//! For every unselected sample the Euclidean distance (in integer lattice
//! coordinates) to its closest selected sample is computed; FUS is the
//! maximum of those distances. A small FUS means the selection leaves no
//! large uncovered gap in the occupied region.

use super::kdtree::KdTree;
use crate::feature_space::GridPointSet;
use crate::{Error, Result};

fn selected_coords(selected: &[usize], grid: &GridPointSet) -> Vec<f64> {
    let dim = grid.dim();
    let mut coords = Vec::with_capacity(selected.len() * dim);
    for &i in selected {
        coords.extend(grid.lattice_row(i).iter().map(|&c| c as f64));
    }
    coords
}

fn lattice_query(grid: &GridPointSet, i: usize, buf: &mut Vec<f64>) {
    buf.clear();
    buf.extend(grid.lattice_row(i).iter().map(|&c| c as f64));
}

/// Maximum over unselected samples of the distance to the nearest selected
/// sample. Returns 0 when every sample is selected; an empty selection is an
/// error.
pub fn compute_fus(selected: &[usize], grid: &GridPointSet) -> Result<f64> {
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    let n = grid.n_samples();
    let mut is_selected = vec![false; n];
    for &i in selected {
        is_selected[i] = true;
    }
    let coords = selected_coords(selected, grid);
    let tree = KdTree::new(&coords, grid.dim());
    let mut max_d2 = 0.0f64;
    let mut query = Vec::with_capacity(grid.dim());
    for i in 0..n {
        if is_selected[i] {
            continue;
        }
        lattice_query(grid, i, &mut query);
        let (_, d2) = tree.nearest(&query).expect("selection is non-empty");
        if d2 > max_d2 {
            max_d2 = d2;
        }
    }
    Ok(max_d2.sqrt())
}

/// Per-unselected-sample nearest distances, sorted descending (ties by
/// ascending sample index). The first entry, if any, realizes the FUS.
pub fn nearest_selected_distances(
    selected: &[usize],
    grid: &GridPointSet,
) -> Result<Vec<(usize, f64)>> {
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    let n = grid.n_samples();
    let mut is_selected = vec![false; n];
    for &i in selected {
        is_selected[i] = true;
    }
    let coords = selected_coords(selected, grid);
    let tree = KdTree::new(&coords, grid.dim());
    let mut out = Vec::with_capacity(n - selected.len().min(n));
    let mut query = Vec::with_capacity(grid.dim());
    for i in 0..n {
        if is_selected[i] {
            continue;
        }
        lattice_query(grid, i, &mut query);
        let (_, d2) = tree.nearest(&query).expect("selection is non-empty");
        out.push((i, d2.sqrt()));
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    Ok(out)
}
