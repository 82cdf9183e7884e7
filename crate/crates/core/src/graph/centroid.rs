//! Skeleton centroids: per component, the pixel whose farthest geodesic
//! distance (in 8-connected steps inside the skeleton) is smallest.

use std::collections::VecDeque;

use crate::morphology::Skeleton;
use crate::raster::{BitRaster, Pixel};

/// Compact adjacency of one connected pixel set, vertices in raster order.
pub(crate) struct PixelGraph {
    pub pixels: Vec<Pixel>,
    offsets: Vec<u32>,
    edges: Vec<u32>,
}

impl PixelGraph {
    pub fn new(raster: &BitRaster, pixels: Vec<Pixel>) -> Self {
        let mut local = vec![u32::MAX; raster.bits().len()];
        for (i, &p) in pixels.iter().enumerate() {
            local[raster.index(p)] = i as u32;
        }
        let mut offsets = Vec::with_capacity(pixels.len() + 1);
        let mut edges = Vec::with_capacity(pixels.len() * 2);
        offsets.push(0);
        for &p in &pixels {
            edges.extend(
                raster
                    .set_neighbors(p)
                    .map(|q| local[raster.index(q)])
                    .filter(|&q| q != u32::MAX),
            );
            offsets.push(edges.len() as u32);
        }
        Self {
            pixels,
            offsets,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    fn neighbors(&self, v: usize) -> &[u32] {
        &self.edges[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Hop distances from `source`; unreachable vertices get `u32::MAX`.
    pub fn bfs(&self, source: usize, dist: &mut Vec<u32>, queue: &mut VecDeque<u32>) -> u32 {
        dist.clear();
        dist.resize(self.len(), u32::MAX);
        queue.clear();
        dist[source] = 0;
        queue.push_back(source as u32);
        let mut far = 0;
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            far = far.max(d);
            for &w in self.neighbors(v as usize) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        far
    }

    /// Index of the minimum-eccentricity vertex, ties to the lowest index.
    ///
    /// Exact. Eccentricity bounds from each BFS (`|e(v) - d(v,w)| <= e(w)
    /// <= e(v) + d(v,w)` and `d(v,w) <= e(w)`) prune vertices that cannot
    /// beat the best eccentricity found so far, so only a handful of BFS
    /// passes are needed on skeleton-like graphs.
    pub fn center(&self) -> usize {
        let n = self.len();
        let mut lower = vec![0u32; n];
        let mut upper = vec![u32::MAX; n];
        let mut exact = vec![false; n];
        let mut best = u32::MAX;
        let mut dist = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        loop {
            let next = (0..n)
                .filter(|&v| !exact[v] && lower[v] <= best)
                .min_by_key(|&v| (lower[v], v));
            let Some(v) = next else { break };
            let ecc = self.bfs(v, &mut dist, &mut queue);
            exact[v] = true;
            lower[v] = ecc;
            upper[v] = ecc;
            best = best.min(ecc);
            for w in 0..n {
                if exact[w] {
                    continue;
                }
                let d = dist[w];
                lower[w] = lower[w].max(d).max(ecc.saturating_sub(d));
                upper[w] = upper[w].min(ecc + d);
                if lower[w] == upper[w] {
                    exact[w] = true;
                    best = best.min(lower[w]);
                }
            }
        }
        (0..n)
            .find(|&v| exact[v] && lower[v] == best)
            .expect("non-empty graph has a center")
    }
}

/// Pixels of each 8-connected component, components ordered by their first
/// raster pixel and pixels in raster order.
pub(crate) fn components(raster: &BitRaster) -> Vec<Vec<Pixel>> {
    let (labels, count) = raster.label_components();
    let mut out = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        if l != 0 {
            out[l as usize - 1].push(raster.pixel_at(i));
        }
    }
    out
}

/// One centroid per component; ties go to the smallest `(row, col)`.
pub fn compute_centroid(skeleton: &Skeleton) -> Vec<Pixel> {
    let raster = skeleton.raster();
    components(raster)
        .into_iter()
        .map(|pixels| {
            let g = PixelGraph::new(raster, pixels);
            g.pixels[g.center()]
        })
        .collect()
}
