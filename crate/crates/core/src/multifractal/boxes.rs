use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::BitRaster;

/// Which grid boxes are dropped before the moments are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExclusionPolicy {
    /// Drop boxes whose every in-raster pixel is foreground.
    pub exclude_saturated: bool,
    /// Drop boxes holding fewer foreground pixels than this.
    pub min_pixels: u32,
}

impl Default for ExclusionPolicy {
    fn default() -> Self {
        Self {
            exclude_saturated: true,
            min_pixels: 3,
        }
    }
}

impl ExclusionPolicy {
    pub const NONE: ExclusionPolicy = ExclusionPolicy {
        exclude_saturated: false,
        min_pixels: 0,
    };

    fn keeps(&self, count: u32, capacity: u32) -> bool {
        !(self.exclude_saturated && count == capacity) && count >= self.min_pixels
    }
}

/// Occupied boxes of one ε-grid.
///
/// Boxes cut by the raster border hold fewer than ε² pixels; `capacity`
/// records how many, so that moments can treat such a box as the matching
/// fraction of a full box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGridMeasure {
    pub epsilon: usize,
    /// Foreground share of each occupied box; sums to 1.
    pub probabilities: Vec<f64>,
    pub counts: Vec<u32>,
    /// In-raster pixels of each box.
    pub capacity: Vec<u32>,
}

impl BoxGridMeasure {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Fraction of a full ε×ε box inside the raster, per box.
    pub fn coverage(&self) -> impl Iterator<Item = f64> + '_ {
        let full = (self.epsilon * self.epsilon) as f64;
        self.capacity.iter().map(move |&c| c as f64 / full)
    }

    /// Drops excluded boxes and renormalizes. The result may be empty.
    pub fn excluding(&self, policy: &ExclusionPolicy) -> BoxGridMeasure {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| policy.keeps(self.counts[i], self.capacity[i]))
            .collect();
        let counts: Vec<u32> = keep.iter().map(|&i| self.counts[i]).collect();
        let capacity = keep.iter().map(|&i| self.capacity[i]).collect();
        let total: u64 = counts.iter().map(|&c| u64::from(c)).sum();
        let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
        BoxGridMeasure {
            epsilon: self.epsilon,
            probabilities,
            counts,
            capacity,
        }
    }
}

/// Extent of box `i` along one axis of length `len`, for a grid whose lines
/// sit at `offset + kε`.
fn box_span(i: usize, shift: usize, eps: usize, len: usize) -> u32 {
    let start = (i * eps).saturating_sub(shift);
    let end = ((i + 1) * eps - shift).min(len);
    (end - start) as u32
}

/// Tiles the raster with ε×ε boxes whose grid lines pass through
/// `origin_offset + k·ε` and returns the occupied ones in row-major box order.
pub fn box_probabilities(
    raster: &BitRaster,
    epsilon: usize,
    origin_offset: (usize, usize),
) -> Result<BoxGridMeasure> {
    if epsilon == 0 {
        return Err(Error::Validation("box size must be at least 1".into()));
    }
    let (h, w) = (raster.height(), raster.width());
    let shift_r = (epsilon - origin_offset.0 % epsilon) % epsilon;
    let shift_c = (epsilon - origin_offset.1 % epsilon) % epsilon;
    let rows = (h + shift_r).div_ceil(epsilon);
    let cols = (w + shift_c).div_ceil(epsilon);
    let mut grid = vec![0u32; rows * cols];
    let mut total = 0u64;
    for p in raster.pixels() {
        let br = (p.row + shift_r) / epsilon;
        let bc = (p.col + shift_c) / epsilon;
        grid[br * cols + bc] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::EmptyMeasure("raster has no foreground pixels".into()));
    }
    let mut counts = Vec::new();
    let mut capacity = Vec::new();
    for (i, &c) in grid.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (br, bc) = (i / cols, i % cols);
        counts.push(c);
        capacity.push(box_span(br, shift_r, epsilon, h) * box_span(bc, shift_c, epsilon, w));
    }
    let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(BoxGridMeasure {
        epsilon,
        probabilities,
        counts,
        capacity,
    })
}
