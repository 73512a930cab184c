//! Exact nearest-neighbour search on low-dimensional point sets.
//!
//! A plain kd-tree over a flat coordinate array. Queries are exact: squared
//! distances are accumulated dimension by dimension in index order, exactly
//! like the brute-force loop, so results (including the squared distance
//! bits) are interchangeable with an `O(n)` scan. Distance ties are broken
//! toward the lowest point index.
//!
//! The filtered query returns the lowest *eligible* index among the points
//! tied at the global minimum distance, which is what the draw loop needs:
//! a drawn grid point maps to its nearest data sample, and the draw is
//! discarded when every nearest-tied sample is ineligible.

const LEAF_SIZE: usize = 8;

enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

pub struct KdTree<'a> {
    points: &'a [f64],
    dim: usize,
    /// Permutation of point indices; leaves reference contiguous ranges.
    order: Vec<u32>,
    nodes: Vec<Node>,
    root: usize,
}

/// Result of a tie-aware filtered query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiedNearest {
    /// Global minimum squared distance over all points (ignoring the filter).
    pub dist2: f64,
    /// Lowest eligible index among points at exactly `dist2`, if any.
    pub chosen: Option<usize>,
}

impl<'a> KdTree<'a> {
    /// Build over row-major `n * dim` coordinates.
    pub fn new(points: &'a [f64], dim: usize) -> Self {
        assert!(dim > 0, "kd-tree dimension must be positive");
        assert_eq!(points.len() % dim, 0);
        let n = points.len() / dim;
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut nodes = Vec::new();
        let root = if n == 0 {
            usize::MAX
        } else {
            build(points, dim, &mut order, 0, n, 0, &mut nodes)
        };
        Self {
            points,
            dim,
            order,
            nodes,
            root,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn dist2(&self, idx: u32, query: &[f64]) -> f64 {
        let base = idx as usize * self.dim;
        let mut acc = 0.0;
        for j in 0..self.dim {
            let diff = query[j] - self.points[base + j];
            acc += diff * diff;
        }
        acc
    }

    /// Nearest point to `query`, ties broken toward the lowest index.
    pub fn nearest(&self, query: &[f64]) -> Option<(usize, f64)> {
        let t = self.nearest_tied(query, |_| true)?;
        t.chosen.map(|i| (i, t.dist2))
    }

    /// Tie-aware filtered nearest: global minimum distance plus the lowest
    /// index among the tied points accepted by `eligible`.
    pub fn nearest_tied<F>(&self, query: &[f64], eligible: F) -> Option<TiedNearest>
    where
        F: Fn(usize) -> bool,
    {
        assert_eq!(query.len(), self.dim);
        if self.is_empty() {
            return None;
        }
        let mut best = TiedNearest {
            dist2: f64::INFINITY,
            chosen: None,
        };
        self.search(self.root, query, &eligible, &mut best);
        Some(best)
    }

    fn consider<F: Fn(usize) -> bool>(&self, idx: u32, query: &[f64], eligible: &F, best: &mut TiedNearest) {
        let d2 = self.dist2(idx, query);
        let i = idx as usize;
        if d2 < best.dist2 {
            best.dist2 = d2;
            best.chosen = eligible(i).then_some(i);
        } else if d2 == best.dist2 && eligible(i) && best.chosen.is_none_or(|c| i < c) {
            best.chosen = Some(i);
        }
    }

    fn search<F: Fn(usize) -> bool>(&self, node: usize, query: &[f64], eligible: &F, best: &mut TiedNearest) {
        match &self.nodes[node] {
            Node::Leaf { start, end } => {
                for &idx in &self.order[*start..*end] {
                    self.consider(idx, query, eligible, best);
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = query[*axis] - value;
                let (near, far) = if diff < 0.0 { (*left, *right) } else { (*right, *left) };
                self.search(near, query, eligible, best);
                // The far side may hold a point at exactly the current best
                // distance with a lower index, so only prune on strict
                // greater-than.
                if diff * diff <= best.dist2 {
                    self.search(far, query, eligible, best);
                }
            }
        }
    }
}

fn build(
    points: &[f64],
    dim: usize,
    order: &mut [u32],
    start: usize,
    end: usize,
    depth: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let len = end - start;
    if len <= LEAF_SIZE {
        nodes.push(Node::Leaf { start, end });
        return nodes.len() - 1;
    }
    let axis = depth % dim;
    let mid = len / 2;
    let coord = |idx: u32| points[idx as usize * dim + axis];
    order[start..end].select_nth_unstable_by(mid, |&a, &b| {
        coord(a)
            .partial_cmp(&coord(b))
            .expect("finite coordinates")
            .then(a.cmp(&b))
    });
    let value = coord(order[start + mid]);
    let left = build(points, dim, order, start, start + mid, depth + 1, nodes);
    let right = build(points, dim, order, start + mid, end, depth + 1, nodes);
    nodes.push(Node::Split {
        axis,
        value,
        left,
        right,
    });
    nodes.len() - 1
}
