//! Uniform subset selection over the dilated sampling set.
//!
//! Each trial draws points uniformly *without replacement* from the sampling
//! set, maps every drawn point to its nearest data sample (Euclidean distance
//! between the drawn integer point and the samples' continuous grid-scaled
//! coordinates), and keeps drawing until `k` unique samples are collected.
//! Nearest-sample ties go to the lowest still-eligible row index; a draw
//! whose nearest-tied samples are all ineligible (already selected, or group
//! already represented when group exclusion is on) is discarded. Exhausting
//! the sampling set first is a hard error, which is the reason for drawing
//! without replacement: the endless redraw loop becomes a finite, detectable
//! failure.
//!
//! [`select`] runs `n_trials` independent trials, each seeded from
//! `derive_seed(master_seed, trial_index)`, and returns the candidate with
//! the smallest FUS (ties to the lowest trial index). Trials are independent
//! and run in parallel; the result is bit-identical for any thread count.

mod element;
mod fus;
mod kdtree;
mod sset;

pub use element::{build_structuring_element, build_structuring_element_capped, StructuringElement, DEFAULT_OFFSET_CAP};
pub use fus::{compute_fus, nearest_selected_distances};
pub use kdtree::{KdTree, TiedNearest};
pub use sset::{dilate, dilate_seq, SamplingSet};

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::feature_space::{FeatureMatrix, GridConfig, GridPointSet};
use crate::rng::derive_seed;
use crate::{exec, Error, Result};

/// Tie-break policy identifier recorded in selection outputs.
pub const TIE_BREAK_POLICY: &str = "nearest-sample: lowest row index; equal FUS: lowest trial index";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    /// Subset size.
    pub k: usize,
    /// Number of independent trials to minimize FUS over.
    pub n_trials: usize,
    /// Master seed; trial seeds are derived from it.
    pub seed: u64,
    /// Forbid selecting two samples with the same group id.
    pub enforce_group_exclusion: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Selected sample ids, in draw order of the winning trial.
    pub selected_ids: Vec<String>,
    /// FUS of the winning trial.
    pub fus: f64,
    /// Index of the winning trial.
    pub winning_trial: usize,
    pub params: SelectionParams,
    pub grid_config: GridConfig,
}

/// A selection plus the per-trial FUS log.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRun {
    pub result: SelectionResult,
    /// FUS of every trial, indexed by trial number.
    pub trial_fus: Vec<f64>,
}

/// Uniform draw without replacement over `0..len`, backed by a lazy
/// Fisher-Yates so that memory is proportional to the number of draws.
struct UniformWithoutReplacement {
    remaining: usize,
    swaps: HashMap<usize, usize>,
}

impl UniformWithoutReplacement {
    fn new(len: usize) -> Self {
        Self {
            remaining: len,
            swaps: HashMap::new(),
        }
    }

    fn draw(&mut self, rng: &mut StdRng) -> Option<usize> {
        if self.remaining == 0 {
            return None;
        }
        let j = rng.random_range(0..self.remaining);
        let picked = self.swaps.get(&j).copied().unwrap_or(j);
        let last = self.remaining - 1;
        let last_value = self.swaps.get(&last).copied().unwrap_or(last);
        self.swaps.insert(j, last_value);
        self.remaining -= 1;
        Some(picked)
    }
}

/// Immutable per-selection state shared by all trials.
struct TrialContext<'a> {
    sset: &'a SamplingSet,
    grid: &'a GridPointSet,
    tree: KdTree<'a>,
    /// Dense group index per sample, when group exclusion is active.
    group_of: Option<Vec<u32>>,
    n_groups: usize,
}

impl<'a> TrialContext<'a> {
    fn new(
        sset: &'a SamplingSet,
        grid: &'a GridPointSet,
        matrix: &'a FeatureMatrix,
        params: &SelectionParams,
    ) -> Result<Self> {
        if sset.dim() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                got: sset.dim(),
            });
        }
        let n = grid.n_samples();
        if matrix.n_samples() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.n_samples(),
            });
        }
        if params.k == 0 || params.n_trials == 0 {
            return Err(Error::Infeasible("k and n_trials must be >= 1".into()));
        }
        if params.k > n {
            return Err(Error::Infeasible(format!(
                "k={} exceeds the {} available samples",
                params.k, n
            )));
        }
        let (group_of, n_groups) = if params.enforce_group_exclusion {
            let groups = matrix.groups().ok_or_else(|| {
                Error::Infeasible("group exclusion requires a group column".into())
            })?;
            let mut index: HashMap<&str, u32> = HashMap::new();
            let mut dense = Vec::with_capacity(n);
            for g in groups {
                let next = index.len() as u32;
                let id = *index.entry(g.as_str()).or_insert(next);
                dense.push(id);
            }
            let n_groups = index.len();
            if params.k > n_groups {
                return Err(Error::Infeasible(format!(
                    "k={} exceeds the {} distinct groups",
                    params.k, n_groups
                )));
            }
            (Some(dense), n_groups)
        } else {
            (None, 0)
        };
        Ok(Self {
            sset,
            grid,
            tree: KdTree::new(grid.scaled(), grid.dim()),
            group_of,
            n_groups,
        })
    }

    fn run_trial(&self, params: &SelectionParams, trial_seed: u64) -> Result<Vec<usize>> {
        let mut rng = StdRng::seed_from_u64(trial_seed);
        let mut pool = UniformWithoutReplacement::new(self.sset.len());
        let mut selected = Vec::with_capacity(params.k);
        let mut is_selected = vec![false; self.grid.n_samples()];
        let mut group_taken = vec![false; self.n_groups];
        let mut query = vec![0.0f64; self.sset.dim()];
        while selected.len() < params.k {
            let Some(point_idx) = pool.draw(&mut rng) else {
                return Err(Error::InsufficientDiversity {
                    selected: selected.len(),
                    k: params.k,
                });
            };
            for (q, &c) in query.iter_mut().zip(self.sset.point(point_idx)) {
                *q = c as f64;
            }
            let eligible = |i: usize| {
                !is_selected[i]
                    && self
                        .group_of
                        .as_ref()
                        .is_none_or(|g| !group_taken[g[i] as usize])
            };
            let tied = self
                .tree
                .nearest_tied(&query, eligible)
                .expect("selection requires at least one sample");
            if let Some(sample) = tied.chosen {
                is_selected[sample] = true;
                if let Some(g) = &self.group_of {
                    group_taken[g[sample] as usize] = true;
                }
                selected.push(sample);
            }
        }
        Ok(selected)
    }
}

/// Draw one candidate selection of `k` unique sample indices.
///
/// Convenience entry point matching a single trial of [`select`]; it builds
/// its own nearest-neighbour index, so prefer [`select`] for repeated trials.
pub fn draw_one_trial(
    sset: &SamplingSet,
    grid: &GridPointSet,
    matrix: &FeatureMatrix,
    params: &SelectionParams,
    trial_seed: u64,
) -> Result<Vec<usize>> {
    let ctx = TrialContext::new(sset, grid, matrix, params)?;
    ctx.run_trial(params, trial_seed)
}

fn select_impl(
    matrix: &FeatureMatrix,
    grid: &GridPointSet,
    sset: &SamplingSet,
    params: &SelectionParams,
    sequential: bool,
) -> Result<SelectionRun> {
    let ctx = TrialContext::new(sset, grid, matrix, params)?;
    let run = |t: usize| -> Result<(Vec<usize>, f64)> {
        let indices = ctx.run_trial(params, derive_seed(params.seed, t as u64))?;
        let fus = compute_fus(&indices, grid)?;
        Ok((indices, fus))
    };
    let outcomes = if sequential {
        exec::map_indexed_seq(params.n_trials, run)
    } else {
        exec::map_indexed(params.n_trials, run)
    };
    let mut trials = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        // propagate the lowest-indexed failure for a deterministic error
        trials.push(outcome?);
    }
    let mut best = 0usize;
    for t in 1..trials.len() {
        if trials[t].1 < trials[best].1 {
            best = t;
        }
    }
    let trial_fus: Vec<f64> = trials.iter().map(|t| t.1).collect();
    let (winning_indices, fus) = trials.swap_remove(best);
    debug_assert_eq!(
        compute_fus(&winning_indices, grid)?.to_bits(),
        fus.to_bits(),
        "selection result must be self-consistent"
    );
    let selected_ids = winning_indices
        .iter()
        .map(|&i| matrix.ids()[i].clone())
        .collect();
    Ok(SelectionRun {
        result: SelectionResult {
            selected_ids,
            fus,
            winning_trial: best,
            params: params.clone(),
            grid_config: grid.config(),
        },
        trial_fus,
    })
}

/// Run `n_trials` independent trials and return the candidate subset with
/// the lowest FUS. Parallel when the `parallel` feature is enabled; output
/// does not depend on thread count or trial execution order.
pub fn select(
    matrix: &FeatureMatrix,
    grid: &GridPointSet,
    sset: &SamplingSet,
    params: &SelectionParams,
) -> Result<SelectionRun> {
    select_impl(matrix, grid, sset, params, false)
}

/// Sequential reference implementation of [`select`].
pub fn select_seq(
    matrix: &FeatureMatrix,
    grid: &GridPointSet,
    sset: &SamplingSet,
    params: &SelectionParams,
) -> Result<SelectionRun> {
    select_impl(matrix, grid, sset, params, true)
}
