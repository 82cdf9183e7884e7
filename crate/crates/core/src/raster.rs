//! Row-major boolean rasters and pixel-neighborhood helpers shared by every
//! stage of the pipeline.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// A pixel coordinate. Ordering is lexicographic on `(row, col)`, which is the
/// tie-break used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pixel {
    pub row: usize,
    pub col: usize,
}

impl Pixel {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Euclidean distance between pixel centers.
    pub fn distance(self, other: Pixel) -> f64 {
        let dr = self.row as f64 - other.row as f64;
        let dc = self.col as f64 - other.col as f64;
        dr.hypot(dc)
    }

    /// True when the two pixels touch diagonally (and not along an axis).
    pub fn is_diagonal_to(self, other: Pixel) -> bool {
        self.row.abs_diff(other.row) == 1 && self.col.abs_diff(other.col) == 1
    }

    pub fn is_neighbor_of(self, other: Pixel) -> bool {
        self != other && self.row.abs_diff(other.row) <= 1 && self.col.abs_diff(other.col) <= 1
    }
}

/// 8-neighborhood offsets in the visiting order up, down, left, right,
/// up-left, up-right, down-left, down-right.
pub const NEIGHBORS_8: [(isize, isize); 8] = [
    (-1, 0),
    (1, 0),
    (0, -1),
    (0, 1),
    (-1, -1),
    (-1, 1),
    (1, -1),
    (1, 1),
];

/// A rectangular bit raster, `true` meaning foreground.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRaster {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BitRaster {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Option<Self> {
        (bits.len() == width * height).then_some(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                bits.push(f(row, col));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: impl IntoIterator<Item = Pixel>) -> Self {
        let mut raster = Self::new(width, height);
        for p in pixels {
            raster.set(p, true);
        }
        raster
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn index(&self, p: Pixel) -> usize {
        p.row * self.width + p.col
    }

    #[inline]
    pub fn pixel_at(&self, index: usize) -> Pixel {
        Pixel::new(index / self.width, index % self.width)
    }

    #[inline]
    pub fn get(&self, p: Pixel) -> bool {
        p.row < self.height && p.col < self.width && self.bits[p.row * self.width + p.col]
    }

    /// Signed lookup; anything outside the raster reads as background.
    #[inline]
    pub fn get_signed(&self, row: isize, col: isize) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.bits[row as usize * self.width + col as usize]
    }

    /// Panics when `p` is outside the raster.
    #[inline]
    pub fn set(&mut self, p: Pixel, value: bool) {
        assert!(p.row < self.height && p.col < self.width, "pixel {p:?} out of bounds");
        let idx = p.row * self.width + p.col;
        self.bits[idx] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Foreground pixels in raster (lexicographic) order.
    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| self.pixel_at(i))
    }

    /// In-bounds 8-neighbors of `p`, in [`NEIGHBORS_8`] order.
    pub fn neighbors(&self, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
        let (h, w) = (self.height as isize, self.width as isize);
        NEIGHBORS_8.iter().filter_map(move |&(dr, dc)| {
            let r = p.row as isize + dr;
            let c = p.col as isize + dc;
            (r >= 0 && c >= 0 && r < h && c < w).then(|| Pixel::new(r as usize, c as usize))
        })
    }

    /// Foreground 8-neighbors of `p`.
    pub fn set_neighbors(&self, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
        self.neighbors(p).filter(move |&q| self.get(q))
    }

    pub fn neighbor_count(&self, p: Pixel) -> usize {
        self.set_neighbors(p).count()
    }

    /// True when every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &BitRaster) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Labels 8-connected foreground components. Labels start at 1 and are
    /// assigned in raster order of each component's first pixel; background
    /// is 0.
    pub fn label_components(&self) -> (Vec<u32>, usize) {
        let mut labels = vec![0u32; self.bits.len()];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..self.bits.len() {
            if !self.bits[start] || labels[start] != 0 {
                continue;
            }
            next += 1;
            labels[start] = next;
            queue.push_back(start);
            while let Some(idx) = queue.pop_front() {
                let p = self.pixel_at(idx);
                for q in self.set_neighbors(p) {
                    let qi = self.index(q);
                    if labels[qi] == 0 {
                        labels[qi] = next;
                        queue.push_back(qi);
                    }
                }
            }
        }
        (labels, next as usize)
    }

    pub fn component_count(&self) -> usize {
        self.label_components().1
    }

    /// Rotates a quarter turn clockwise.
    pub fn rotate90(&self) -> Self {
        let (w, h) = (self.width, self.height);
        let mut out = Self::new(h, w);
        for p in self.pixels() {
            out.set(Pixel::new(p.col, h - 1 - p.row), true);
        }
        out
    }

    pub fn flip_horizontal(&self) -> Self {
        let mut out = Self::new(self.width, self.height);
        for p in self.pixels() {
            out.set(Pixel::new(p.row, self.width - 1 - p.col), true);
        }
        out
    }

    pub fn flip_vertical(&self) -> Self {
        let mut out = Self::new(self.width, self.height);
        for p in self.pixels() {
            out.set(Pixel::new(self.height - 1 - p.row, p.col), true);
        }
        out
    }
}

/// Pixels of the digital straight segment from `a` to `b` (Bresenham), both
/// ends included. Consecutive pixels are 8-adjacent.
pub fn line_pixels(a: (isize, isize), b: (isize, isize)) -> Vec<(isize, isize)> {
    let (mut r, mut c) = a;
    let dr = (b.0 - a.0).abs();
    let dc = (b.1 - a.1).abs();
    let sr = if b.0 >= a.0 { 1 } else { -1 };
    let sc = if b.1 >= a.1 { 1 } else { -1 };
    let mut err = dc - dr;
    let mut out = Vec::with_capacity((dr.max(dc) + 1) as usize);
    loop {
        out.push((r, c));
        if (r, c) == b {
            break;
        }
        let e2 = 2 * err;
        if e2 > -dr {
            err -= dr;
            c += sc;
        }
        if e2 < dc {
            err += dc;
            r += sr;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_use_eight_connectivity() {
        let r = BitRaster::from_pixels(5, 5, [Pixel::new(0, 0), Pixel::new(1, 1), Pixel::new(3, 3)]);
        assert_eq!(r.component_count(), 2);
    }

    #[test]
    fn rotate_four_times_is_identity() {
        let r = BitRaster::from_pixels(4, 3, [Pixel::new(0, 1), Pixel::new(2, 3)]);
        let back = r.rotate90().rotate90().rotate90().rotate90();
        assert_eq!(r, back);
        assert_eq!(r.rotate90().width(), 3);
    }

    #[test]
    fn bresenham_steps_are_eight_adjacent() {
        let line = line_pixels((0, 0), (7, -19));
        assert_eq!(line.first(), Some(&(0, 0)));
        assert_eq!(line.last(), Some(&(7, -19)));
        assert_eq!(line.len(), 20);
        for w in line.windows(2) {
            assert!((w[0].0 - w[1].0).abs() <= 1 && (w[0].1 - w[1].1).abs() <= 1);
        }
    }
}
