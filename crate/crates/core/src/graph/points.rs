use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::morphology::Skeleton;
use crate::raster::{BitRaster, Pixel};

/// Kernel response of an endpoint: center 10 plus one neighbor.
pub const ENDPOINT_RESPONSE: u32 = 11;
/// Minimum kernel response of an intersection: at least three neighbors.
pub const INTERSECTION_RESPONSE: u32 = 13;

const CENTER_WEIGHT: u32 = 10;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticularPoints {
    /// Raster order.
    pub endpoints: Vec<Pixel>,
    /// Raster order; unmerged, so a junction may contribute several pixels.
    pub intersections: Vec<Pixel>,
}

/// A cluster of 8-adjacent intersection pixels treated as one junction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junction {
    /// Lexicographically smallest member.
    pub representative: Pixel,
    /// Raster order.
    pub members: Vec<Pixel>,
}

/// Response of the 3x3 kernel (center 10, neighbors 1) at a skeleton pixel.
pub fn kernel_response(raster: &BitRaster, p: Pixel) -> u32 {
    CENTER_WEIGHT * raster.get(p) as u32 + raster.neighbor_count(p) as u32
}

pub fn detect_particular_points(skeleton: &Skeleton) -> ParticularPoints {
    let raster = skeleton.raster();
    let mut points = ParticularPoints::default();
    for p in raster.pixels() {
        match kernel_response(raster, p) {
            ENDPOINT_RESPONSE => points.endpoints.push(p),
            r if r >= INTERSECTION_RESPONSE => points.intersections.push(p),
            _ => {}
        }
    }
    points
}

impl ParticularPoints {
    pub fn len(&self) -> usize {
        self.endpoints.len() + self.intersections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty() && self.intersections.is_empty()
    }

    /// Groups 8-adjacent intersection pixels into junctions, ordered by
    /// representative.
    pub fn junctions(&self) -> Vec<Junction> {
        let Some(extent) = self
            .intersections
            .iter()
            .fold(None, |acc: Option<(usize, usize)>, p| {
                let (h, w) = acc.unwrap_or((0, 0));
                Some((h.max(p.row + 2), w.max(p.col + 2)))
            })
        else {
            return Vec::new();
        };
        let raster = BitRaster::from_pixels(extent.1, extent.0, self.intersections.iter().copied());
        let mut seen = vec![false; extent.0 * extent.1];
        let mut out = Vec::new();
        for &start in &self.intersections {
            if seen[raster.index(start)] {
                continue;
            }
            seen[raster.index(start)] = true;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for q in raster.set_neighbors(p) {
                    if !seen[raster.index(q)] {
                        seen[raster.index(q)] = true;
                        members.push(q);
                        queue.push_back(q);
                    }
                }
            }
            members.sort_unstable();
            out.push(Junction {
                representative: members[0],
                members,
            });
        }
        out.sort_unstable_by_key(|j| j.representative);
        out
    }
}
