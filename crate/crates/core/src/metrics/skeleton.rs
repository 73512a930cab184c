//! Topology-preserving 2-d thinning.
//!
//! Iterative directional thinning: for each of the four border directions,
//! foreground pixels that are border pixels in that direction, are not line
//! endpoints, and are *simple* (deletable without changing local topology in
//! the (8, 4) sense) are collected and then deleted sequentially, re-checking
//! simplicity against the live image so connectivity can never break. The
//! passes repeat until a fixed point, which makes the operation idempotent by
//! construction.
//!
//! A pixel is simple when its 8-neighborhood contains exactly one
//! 8-connected foreground component and exactly one 4-connected background
//! component touching an edge neighbor; the 256-entry predicate is
//! precomputed from that definition.

use std::sync::OnceLock;

use crate::image::BinaryMask;

/// One-pixel-wide 8-connected medial line of a mask.
///
/// `arc_length` sums the 8-neighbor step lengths (1 for axial, sqrt(2) for
/// diagonal) over every undirected adjacency once, so a straight path of
/// `P` pixels measures `P - 1` axial units.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    /// Medial-line coordinates in raster order.
    pub pixels: Vec<(u32, u32)>,
    pub arc_length: f64,
}

impl Skeleton {
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }
}

/// Neighbor offsets in fixed order; bit `i` of a neighborhood code marks
/// `NEIGHBORS[i]` as foreground.
const NEIGHBORS: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Indices into `NEIGHBORS` of the 4-adjacent (edge) positions.
const EDGE_NEIGHBORS: [usize; 4] = [1, 3, 4, 6];

fn components(cells: &[usize], four_connected: bool) -> Vec<usize> {
    // union-find over at most 8 cells
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for a in 0..cells.len() {
        for b in (a + 1)..cells.len() {
            let (ax, ay) = NEIGHBORS[cells[a]];
            let (bx, by) = NEIGHBORS[cells[b]];
            let (dx, dy) = ((ax - bx).abs(), (ay - by).abs());
            let adjacent = if four_connected {
                dx + dy == 1
            } else {
                dx <= 1 && dy <= 1
            };
            if adjacent {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    (0..cells.len()).map(|i| find(&mut parent, i)).collect()
}

fn compute_simple(code: u8) -> bool {
    let fg: Vec<usize> = (0..8).filter(|&i| code & (1 << i) != 0).collect();
    if fg.is_empty() {
        return false;
    }
    let fg_roots = components(&fg, false);
    let fg_components = {
        let mut roots = fg_roots.clone();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    };
    if fg_components != 1 {
        return false;
    }
    let bg: Vec<usize> = (0..8).filter(|&i| code & (1 << i) == 0).collect();
    let bg_roots = components(&bg, true);
    let mut edge_roots: Vec<usize> = bg
        .iter()
        .enumerate()
        .filter(|(_, cell)| EDGE_NEIGHBORS.contains(cell))
        .map(|(pos, _)| bg_roots[pos])
        .collect();
    edge_roots.sort_unstable();
    edge_roots.dedup();
    edge_roots.len() == 1
}

fn simple_table() -> &'static [bool; 256] {
    static TABLE: OnceLock<[bool; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [false; 256];
        for (code, entry) in t.iter_mut().enumerate() {
            *entry = compute_simple(code as u8);
        }
        t
    })
}

struct Grid {
    width: i64,
    height: i64,
    bits: Vec<bool>,
}

impl Grid {
    fn get(&self, x: i64, y: i64) -> bool {
        x >= 0 && x < self.width && y >= 0 && y < self.height && self.bits[(y * self.width + x) as usize]
    }

    fn code(&self, x: i64, y: i64) -> u8 {
        let mut code = 0u8;
        for (i, (dx, dy)) in NEIGHBORS.iter().enumerate() {
            if self.get(x + dx, y + dy) {
                code |= 1 << i;
            }
        }
        code
    }
}

/// Border directions applied per iteration: N, S, E, W.
const DIRECTIONS: [(i64, i64); 4] = [(0, -1), (0, 1), (1, 0), (-1, 0)];

/// Thin a mask to its medial line.
pub fn skeletonize(mask: &BinaryMask) -> Skeleton {
    let table = simple_table();
    let mut grid = Grid {
        width: mask.width() as i64,
        height: mask.height() as i64,
        bits: mask.bits().to_vec(),
    };
    let deletable = |grid: &Grid, x: i64, y: i64, dx: i64, dy: i64| -> bool {
        if !grid.get(x, y) || grid.get(x + dx, y + dy) {
            return false; // background, or not a border pixel for this pass
        }
        let code = grid.code(x, y);
        if code.count_ones() < 2 {
            return false; // endpoint or isolated pixel
        }
        table[code as usize]
    };
    let mut candidates: Vec<(i64, i64)> = Vec::new();
    loop {
        let mut changed = false;
        for (dx, dy) in DIRECTIONS {
            candidates.clear();
            for y in 0..grid.height {
                for x in 0..grid.width {
                    if deletable(&grid, x, y, dx, dy) {
                        candidates.push((x, y));
                    }
                }
            }
            // Peel each pass from its own side: the south pass deletes
            // bottom pixels first, the east pass rightmost first, and so
            // on. Otherwise the sequential re-check can strand a boundary
            // tip as a protected endpoint and grow a spur.
            candidates.sort_unstable_by_key(|&(x, y)| (-(dx * x + dy * y), y, x));
            // sequential re-check so earlier deletions in this pass cannot
            // disconnect the remaining candidates
            for &(x, y) in &candidates {
                if deletable(&grid, x, y, dx, dy) {
                    grid.bits[(y * grid.width + x) as usize] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut pixels = Vec::new();
    for y in 0..grid.height {
        for x in 0..grid.width {
            if grid.bits[(y * grid.width + x) as usize] {
                pixels.push((x as u32, y as u32));
            }
        }
    }
    let arc_length = arc_length_of(&pixels, mask.width(), mask.height());
    Skeleton { pixels, arc_length }
}

/// Sum of 8-adjacency step lengths, each undirected pair counted once
/// (east, south and the two downward diagonals of every pixel).
fn arc_length_of(pixels: &[(u32, u32)], width: u32, height: u32) -> f64 {
    let mut set = vec![false; (width as usize) * (height as usize)];
    for &(x, y) in pixels {
        set[(y as usize) * (width as usize) + x as usize] = true;
    }
    let at = |x: i64, y: i64| -> bool {
        x >= 0 && x < width as i64 && y >= 0 && y < height as i64
            && set[(y as usize) * (width as usize) + x as usize]
    };
    let mut length = 0.0;
    for &(x, y) in pixels {
        let (x, y) = (x as i64, y as i64);
        if at(x + 1, y) {
            length += 1.0;
        }
        if at(x, y + 1) {
            length += 1.0;
        }
        if at(x + 1, y + 1) {
            length += std::f64::consts::SQRT_2;
        }
        if at(x - 1, y + 1) {
            length += std::f64::consts::SQRT_2;
        }
    }
    length
}
