//! Synthetic skeletons and masks with known topology, for tests and
//! benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mask_io::BinaryMask;
use crate::morphology::Skeleton;
use crate::raster::{line_pixels, BitRaster, Pixel};

/// Rays from a common center, drawn as digital straight segments.
///
/// Angles are in degrees, counterclockwise from the +column axis with rows
/// pointing down, so 90° points up.
#[derive(Debug, Clone, PartialEq)]
pub struct Star {
    pub center: (isize, isize),
    pub rays: Vec<(f64, f64)>,
}

impl Star {
    pub fn new(center: (isize, isize), rays: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self {
            center,
            rays: rays.into_iter().collect(),
        }
    }

    /// A Y whose two daughters open symmetrically by `opening` degrees
    /// around straight up, over a shorter parent pointing down.
    pub fn y(center: (isize, isize), opening: f64, arm: f64, stem: f64) -> Self {
        let half = opening / 2.0;
        Self::new(center, [(270.0, stem), (90.0 - half, arm), (90.0 + half, arm)])
    }

    pub fn ray_end(&self, i: usize) -> (isize, isize) {
        let (deg, len) = self.rays[i];
        let t = deg.to_radians();
        (
            self.center.0 - (len * t.sin()).round() as isize,
            self.center.1 + (len * t.cos()).round() as isize,
        )
    }

    pub fn pixels(&self) -> Vec<Pixel> {
        let mut out: Vec<Pixel> = (0..self.rays.len())
            .flat_map(|i| line_pixels(self.center, self.ray_end(i)))
            .map(|(r, c)| Pixel::new(r as usize, c as usize))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn skeleton(&self, width: usize, height: usize) -> Skeleton {
        Skeleton::from_raster(BitRaster::from_pixels(width, height, self.pixels()))
    }

    pub fn expected_endpoints(&self) -> usize {
        self.rays.len()
    }

    pub fn expected_intersections(&self) -> usize {
        usize::from(self.rays.len() >= 3)
    }
}

/// Lattice directions, one step each, counterclockwise from east.
const DIRS: [(i64, i64); 8] = [
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// A random tree grown on a coarse lattice whose edges are straight digital
/// segments between neighboring lattice points.
///
/// Growth only accepts edges that keep the skeleton free of accidental
/// contacts: diagonals never cross, lattice points are `spacing` pixels
/// apart, and a vertex of degree two never turns by more than 45°. Under
/// these rules every leaf is exactly one endpoint and every vertex of degree
/// three or more exactly one junction.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeTree {
    pub spacing: usize,
    pub lattice: usize,
    /// Lattice coordinates.
    pub nodes: Vec<(i64, i64)>,
    pub edges: Vec<(usize, usize)>,
    /// Direction index of each edge seen from its first node.
    dirs: Vec<usize>,
    /// Parent-to-child depth of each node.
    pub depth: Vec<usize>,
}

impl LatticeTree {
    /// Grows a tree of at most `target_edges` edges on a `lattice`² grid.
    pub fn random(seed: u64, lattice: usize, spacing: usize, target_edges: usize) -> Self {
        assert!(lattice >= 2 && spacing >= 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mid = (lattice / 2) as i64;
        let mut t = Self {
            spacing,
            lattice,
            nodes: vec![(mid, mid)],
            edges: Vec::new(),
            dirs: Vec::new(),
            depth: vec![0],
        };
        let mut attempts = 0;
        while t.edges.len() < target_edges && attempts < target_edges * 60 {
            attempts += 1;
            let from = rng.gen_range(0..t.nodes.len());
            let d = rng.gen_range(0..8);
            if t.can_grow(from, d) {
                t.grow(from, d);
            }
        }
        t
    }

    fn node_at(&self, at: (i64, i64)) -> Option<usize> {
        self.nodes.iter().position(|&n| n == at)
    }

    /// Directions of the edges at `node`, pointing away from it.
    fn incident_dirs(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .zip(&self.dirs)
            .filter_map(|(&(a, b), &d)| {
                if a == node {
                    Some(d)
                } else if b == node {
                    Some((d + 4) % 8)
                } else {
                    None
                }
            })
            .collect()
    }

    fn can_grow(&self, from: usize, d: usize) -> bool {
        let (r, c) = self.nodes[from];
        let to = (r + DIRS[d].0, c + DIRS[d].1);
        let n = self.lattice as i64;
        if !(0..n).contains(&to.0) || !(0..n).contains(&to.1) || self.node_at(to).is_some() {
            return false;
        }
        // The crossing diagonal of the same cell.
        if d % 2 == 1 {
            let a = (r, to.1);
            let b = (to.0, c);
            if let (Some(a), Some(b)) = (self.node_at(a), self.node_at(b)) {
                if self.edges.iter().any(|&e| e == (a, b) || e == (b, a)) {
                    return false;
                }
            }
        }
        let existing = self.incident_dirs(from);
        if existing.contains(&d) {
            return false;
        }
        if existing.len() == 1 {
            // Degree becomes two: allow straight or a 45° turn only.
            let diff = (existing[0] + 8 - d) % 8;
            if !(3..=5).contains(&diff) {
                return false;
            }
        }
        true
    }

    fn grow(&mut self, from: usize, d: usize) {
        let (r, c) = self.nodes[from];
        self.nodes.push((r + DIRS[d].0, c + DIRS[d].1));
        self.depth.push(self.depth[from] + 1);
        self.edges.push((from, self.nodes.len() - 1));
        self.dirs.push(d);
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    pub fn expected_endpoints(&self) -> usize {
        (0..self.nodes.len()).filter(|&i| self.degree(i) == 1).count()
    }

    pub fn expected_intersections(&self) -> usize {
        (0..self.nodes.len()).filter(|&i| self.degree(i) >= 3).count()
    }

    pub fn side(&self) -> usize {
        self.spacing * (self.lattice + 1)
    }

    fn to_pixel(&self, node: usize) -> (isize, isize) {
        let (r, c) = self.nodes[node];
        let s = self.spacing as i64;
        ((s + r * s) as isize, (s + c * s) as isize)
    }

    pub fn edge_pixels(&self, edge: usize) -> Vec<(isize, isize)> {
        let (a, b) = self.edges[edge];
        line_pixels(self.to_pixel(a), self.to_pixel(b))
    }

    pub fn skeleton(&self) -> Skeleton {
        let side = self.side();
        let px = (0..self.edges.len())
            .flat_map(|e| self.edge_pixels(e))
            .map(|(r, c)| Pixel::new(r as usize, c as usize));
        Skeleton::from_raster(BitRaster::from_pixels(side, side, px))
    }

    /// Draws the tree as a vessel mask, thick near the root and thinning
    /// with depth.
    pub fn mask(&self, root_radius: f64, min_radius: f64) -> BinaryMask {
        let side = self.side() as isize;
        let mut raster = BitRaster::new(side as usize, side as usize);
        for (e, &(_, child)) in self.edges.iter().enumerate() {
            let radius = (root_radius * 0.8f64.powi(self.depth[child] as i32 - 1)).max(min_radius);
            let reach = radius.ceil() as isize;
            for (r, c) in self.edge_pixels(e) {
                for dr in -reach..=reach {
                    for dc in -reach..=reach {
                        let (rr, cc) = (r + dr, c + dc);
                        if ((dr * dr + dc * dc) as f64) <= radius * radius
                            && (0..side).contains(&rr)
                            && (0..side).contains(&cc)
                        {
                            raster.set(Pixel::new(rr as usize, cc as usize), true);
                        }
                    }
                }
            }
        }
        BinaryMask::new(raster).expect("tree canvas is large enough")
    }
}

/// A vessel-like mask: a random lattice tree drawn with tapering width.
pub fn vascular_mask(seed: u64, side_lattice: usize, spacing: usize, edges: usize) -> BinaryMask {
    LatticeTree::random(seed, side_lattice, spacing, edges).mask(3.0, 1.0)
}

/// Straight lines, plus signs, Y/T junctions and random trees, each with its
/// expected endpoint and junction counts.
pub fn topology_suite(seed: u64) -> Vec<(String, Skeleton, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..10 {
        let a = rng.gen_range(0.0..180.0);
        let s = Star::new((60, 60), [(a, 40.0), (a + 180.0, 40.0)]);
        out.push((format!("line-{i}"), s.skeleton(121, 121), 2, 0));
    }
    for i in 0..10 {
        let a = [0.0, 45.0][i % 2];
        let len = rng.gen_range(15.0..45.0);
        let s = Star::new((60, 60), (0..4).map(|k| (a + 90.0 * k as f64, len)));
        out.push((format!("plus-{i}"), s.skeleton(121, 121), 4, 1));
    }
    let mut openings = [60.0, 90.0, 120.0, 180.0];
    openings.shuffle(&mut rng);
    for i in 0..10 {
        let open = openings.get(i).copied().unwrap_or_else(|| rng.gen_range(60.0..180.0));
        let s = Star::y((60, 60), open, 40.0, 20.0);
        out.push((format!("y-{i}"), s.skeleton(121, 121), 3, 1));
    }
    for i in 0..20 {
        let t = LatticeTree::random(rng.gen(), 10, 10, 12 + i);
        let (e, j) = (t.expected_endpoints(), t.expected_intersections());
        out.push((format!("tree-{i}"), t.skeleton(), e, j));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::detect_particular_points;

    #[test]
    fn y_points_up() {
        let s = Star::y((50, 50), 90.0, 20.0, 10.0);
        assert_eq!(s.ray_end(0), (60, 50));
        assert_eq!(s.ray_end(1), (36, 64));
        assert_eq!(s.ray_end(2), (36, 36));
    }

    #[test]
    fn tree_degrees_sum_to_twice_edges() {
        let t = LatticeTree::random(4, 8, 10, 20);
        let total: usize = (0..t.nodes.len()).map(|i| t.degree(i)).sum();
        assert_eq!(total, 2 * t.edges.len());
        assert_eq!(t.nodes.len(), t.edges.len() + 1);
    }

    #[test]
    fn tree_skeleton_matches_construction() {
        for seed in 0..10 {
            let t = LatticeTree::random(seed, 10, 10, 25);
            let p = detect_particular_points(&t.skeleton());
            assert_eq!(p.endpoints.len(), t.expected_endpoints(), "seed {seed}");
            assert_eq!(p.junctions().len(), t.expected_intersections(), "seed {seed}");
        }
    }

    #[test]
    fn suite_has_fifty_cases() {
        assert_eq!(topology_suite(0).len(), 50);
    }
}
