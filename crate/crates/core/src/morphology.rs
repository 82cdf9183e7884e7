//! Skeleton and boundary rasters derived from a vessel mask.

use crate::mask_io::BinaryMask;
use crate::raster::{BitRaster, Pixel};

/// One-pixel-wide medial raster of a mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    raster: BitRaster,
    /// `(height, width)` of the mask this skeleton came from.
    pub source_dims: (usize, usize),
}

impl Skeleton {
    /// Wraps an already-thin raster, e.g. a synthetic skeleton.
    pub fn from_raster(raster: BitRaster) -> Self {
        let source_dims = (raster.height(), raster.width());
        Self {
            raster,
            source_dims,
        }
    }

    pub fn raster(&self) -> &BitRaster {
        &self.raster
    }

    pub fn width(&self) -> usize {
        self.raster.width()
    }

    pub fn height(&self) -> usize {
        self.raster.height()
    }

    pub fn pixel_count(&self) -> usize {
        self.raster.count()
    }

    pub fn is_empty(&self) -> bool {
        self.raster.is_empty()
    }
}

/// Boundary pixels of a mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeMask {
    raster: BitRaster,
}

impl EdgeMask {
    pub fn from_raster(raster: BitRaster) -> Self {
        Self { raster }
    }

    pub fn raster(&self) -> &BitRaster {
        &self.raster
    }

    pub fn pixel_count(&self) -> usize {
        self.raster.count()
    }
}

/// Ring of the 8 neighbors counterclockwise from east:
/// E, NE, N, NW, W, SW, S, SE.
#[inline]
fn ring(r: &BitRaster, p: Pixel) -> [bool; 8] {
    let (row, col) = (p.row as isize, p.col as isize);
    [
        r.get_signed(row, col + 1),
        r.get_signed(row - 1, col + 1),
        r.get_signed(row - 1, col),
        r.get_signed(row - 1, col - 1),
        r.get_signed(row, col - 1),
        r.get_signed(row + 1, col - 1),
        r.get_signed(row + 1, col),
        r.get_signed(row + 1, col + 1),
    ]
}

/// Yokoi connectivity number for 8-connected foreground. A foreground pixel
/// with value 1 is simple: removing it changes neither the foreground
/// components nor the background holes.
#[inline]
fn connectivity_number(n: &[bool; 8]) -> u8 {
    let inv = |k: usize| !n[k % 8] as u8;
    [0usize, 2, 4, 6]
        .iter()
        .map(|&k| inv(k) - inv(k) * inv(k + 1) * inv(k + 2))
        .sum()
}

#[inline]
fn is_deletable(n: &[bool; 8]) -> bool {
    let b = n.iter().filter(|&&x| x).count();
    b >= 2 && connectivity_number(n) == 1
}

/// Guo–Hall deletion test for one sub-iteration. `n` is the E-first ring.
fn guo_hall_deletable(n: &[bool; 8], first_pass: bool) -> bool {
    let x = |k: usize| n[k % 8];
    // Number of 8-connected neighbor groups touching the pixel.
    let c = [0, 2, 4, 6]
        .iter()
        .filter(|&&i| !x(i) && (x(i + 1) || x(i + 2)))
        .count();
    if c != 1 {
        return false;
    }
    let n1 = [1, 3, 5, 7].iter().filter(|&&k| x(k) || x(k - 1)).count();
    let n2 = [1, 3, 5, 7].iter().filter(|&&k| x(k) || x(k + 1)).count();
    if !(2..=3).contains(&n1.min(n2)) {
        return false;
    }
    if first_pass {
        !((x(1) || x(2) || !x(7)) && x(0))
    } else {
        !((x(5) || x(6) || !x(3)) && x(4))
    }
}

/// Thins the mask to a one-pixel-wide, 8-connected skeleton.
///
/// Guo–Hall thinning: each sub-iteration marks deletable pixels against the
/// current raster and removes them together. A final pass strips the
/// 4-connected corner pixels left on staircases.
pub fn skeletonize(mask: &BinaryMask) -> Skeleton {
    let mut work = mask.raster().clone();
    let mut marked = Vec::new();
    loop {
        let mut changed = false;
        for first_pass in [true, false] {
            marked.clear();
            marked.extend(
                work.pixels()
                    .filter(|&p| guo_hall_deletable(&ring(&work, p), first_pass)),
            );
            for &p in &marked {
                work.set(p, false);
            }
            changed |= !marked.is_empty();
        }
        if !changed {
            break;
        }
    }
    remove_staircase_corners(&mut work);
    Skeleton {
        raster: work,
        source_dims: (mask.height(), mask.width()),
    }
}

fn remove_staircase_corners(work: &mut BitRaster) {
    loop {
        let mut changed = false;
        let pixels: Vec<Pixel> = work.pixels().collect();
        for p in pixels {
            let n = ring(work, p);
            let [e, _, north, _, w, _, s, _] = n;
            let corner = (north && e) || (e && s) || (s && w) || (w && north);
            if corner && is_deletable(&n) {
                work.set(p, false);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Boundary pixels: vessel pixels with a positive response to the 3x3
/// Laplacian (center 8, neighbors -1). Outside the raster counts as
/// background, so vessel pixels on the image border are always edges.
pub fn extract_edges(mask: &BinaryMask) -> EdgeMask {
    let src = mask.raster();
    let raster = BitRaster::from_fn(src.width(), src.height(), |row, col| {
        let p = Pixel::new(row, col);
        if !src.get(p) {
            return false;
        }
        let on_border = row == 0 || col == 0 || row + 1 == src.height() || col + 1 == src.width();
        // For binary input the response is 8 - (vessel neighbors).
        on_border || laplacian_response(src, p) > 0
    });
    EdgeMask { raster }
}

fn laplacian_response(src: &BitRaster, p: Pixel) -> i32 {
    8 - src.neighbor_count(p) as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(w: usize, h: usize, f: impl FnMut(usize, usize) -> bool) -> BinaryMask {
        BinaryMask::from_fn(w, h, f).unwrap()
    }

    fn has_full_2x2(r: &BitRaster) -> bool {
        r.pixels().any(|p| {
            r.get(Pixel::new(p.row, p.col + 1))
                && r.get(Pixel::new(p.row + 1, p.col))
                && r.get(Pixel::new(p.row + 1, p.col + 1))
        })
    }

    #[test]
    fn connectivity_number_cases() {
        // Interior pixel.
        assert_eq!(connectivity_number(&[true; 8]), 0);
        // Isolated pixel.
        assert_eq!(connectivity_number(&[false; 8]), 0);
        // Middle of a horizontal line: E and W only, not simple.
        let mut n = [false; 8];
        n[0] = true;
        n[4] = true;
        assert_eq!(connectivity_number(&n), 2);
        // Corner of an L: E and S, simple.
        let mut n = [false; 8];
        n[0] = true;
        n[6] = true;
        assert_eq!(connectivity_number(&n), 1);
    }

    #[test]
    fn empty_mask_gives_empty_skeleton() {
        let s = skeletonize(&BinaryMask::empty(10, 10).unwrap());
        assert!(s.is_empty());
        assert_eq!(s.source_dims, (10, 10));
    }

    #[test]
    fn thick_bar_thins_to_a_line() {
        let m = mask(60, 11, |r, c| (4..7).contains(&r) && (5..55).contains(&c));
        let s = skeletonize(&m);
        let r = s.raster();
        assert!(r.is_subset_of(m.raster()));
        assert_eq!(r.component_count(), 1);
        assert!(!has_full_2x2(r));
        // Brute-force width check: every column holds at most one pixel.
        for c in 0..60 {
            assert!((0..11).filter(|&row| r.get(Pixel::new(row, c))).count() <= 1);
        }
        assert!(s.pixel_count() >= 40, "bar collapsed to {} pixels", s.pixel_count());
        let row = r.pixels().next().unwrap().row;
        assert!((4..=6).contains(&row) && r.pixels().all(|p| p.row == row));
    }

    #[test]
    fn disc_thins_to_a_few_central_pixels() {
        let m = mask(25, 25, |r, c| {
            let (dr, dc) = (r as f64 - 12.0, c as f64 - 12.0);
            dr * dr + dc * dc <= 7.5 * 7.5
        });
        let s = skeletonize(&m);
        assert_eq!(s.raster().component_count(), 1);
        assert!(s.pixel_count() <= 4, "{} pixels", s.pixel_count());
        for p in s.raster().pixels() {
            assert!(p.distance(Pixel::new(12, 12)) <= 2.0);
        }
    }

    #[test]
    fn small_blocks_do_not_vanish() {
        // A 2x2 block has no interior yet must keep a pixel.
        let m = mask(6, 6, |r, c| (2..4).contains(&r) && (2..4).contains(&c));
        let s = skeletonize(&m);
        assert_eq!(s.raster().component_count(), 1);
        // Two-pixel-thick diagonal band.
        let m = mask(20, 20, |r, c| c == r || c == r + 1);
        let s = skeletonize(&m);
        assert_eq!(s.raster().component_count(), 1);
        assert!(s.pixel_count() >= 15);
    }

    #[test]
    fn ring_keeps_its_hole() {
        let m = mask(30, 30, |r, c| {
            let d = ((r as f64 - 15.0).powi(2) + (c as f64 - 15.0).powi(2)).sqrt();
            (8.0..12.0).contains(&d)
        });
        let s = skeletonize(&m);
        assert_eq!(s.raster().component_count(), 1);
        // The center is still enclosed: a 4-connected flood of the background
        // from the corner never reaches it.
        let r = s.raster();
        let mut seen = BitRaster::new(30, 30);
        let mut stack = vec![Pixel::new(0, 0)];
        while let Some(p) = stack.pop() {
            if r.get(p) || seen.get(p) {
                continue;
            }
            seen.set(p, true);
            let (row, col) = (p.row as isize, p.col as isize);
            for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                let (nr, nc) = (row + dr, col + dc);
                if (0..30).contains(&nr) && (0..30).contains(&nc) {
                    stack.push(Pixel::new(nr as usize, nc as usize));
                }
            }
        }
        assert!(!seen.get(Pixel::new(15, 15)));
    }

    #[test]
    fn full_mask_edges_are_the_border() {
        let e = extract_edges(&mask(10, 10, |_, _| true));
        assert_eq!(e.pixel_count(), 36);
        for p in e.raster().pixels() {
            assert!(p.row == 0 || p.col == 0 || p.row == 9 || p.col == 9);
        }
    }

    #[test]
    fn isolated_pixel_is_an_edge() {
        let e = extract_edges(&mask(7, 7, |r, c| (r, c) == (3, 3)));
        assert_eq!(e.pixel_count(), 1);
    }

    #[test]
    fn square_edges_are_its_perimeter() {
        let m = mask(20, 20, |r, c| (7..12).contains(&r) && (7..12).contains(&c));
        let e = extract_edges(&m);
        // Brute-force neighbor scan
        let expected: Vec<Pixel> = m
            .raster()
            .pixels()
            .filter(|&p| m.raster().neighbors(p).any(|q| !m.raster().get(q)))
            .collect();
        assert_eq!(expected.len(), 16);
        assert_eq!(e.raster().pixels().collect::<Vec<_>>(), expected);
    }
}
