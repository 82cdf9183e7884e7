//! Overall length, perimeter and area of a vessel network.

use serde::{Deserialize, Serialize};

use crate::mask_io::BinaryMask;
use crate::morphology::{EdgeMask, Skeleton};
use crate::raster::BitRaster;

/// Side of the fundus images the fixed normalization was defined for.
pub const REFERENCE_SIDE: usize = 1444;

/// Fixed normalization area, 1444².
pub const REFERENCE_AREA: f64 = (REFERENCE_SIDE * REFERENCE_SIDE) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryBiomarkers {
    pub ovlen: f64,
    pub ovper: f64,
    /// Percent of `norm_area`.
    pub ovarea: f64,
    pub norm_area: f64,
}

/// Split of a pixel set into axis-weighted and diagonal-weighted pixels.
///
/// A pixel counts as diagonal when it has at least one neighbor in the set
/// and all of them touch it diagonally; such pixels weigh √2, all others 1.
/// Counting instead of summing floats keeps the total bit-exact under any
/// traversal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PixelWeights {
    pub axis: usize,
    pub diagonal: usize,
}

impl PixelWeights {
    pub fn of(raster: &BitRaster) -> Self {
        let mut w = Self::default();
        for p in raster.pixels() {
            let mut any = false;
            let mut all_diagonal = true;
            for q in raster.set_neighbors(p) {
                any = true;
                all_diagonal &= p.is_diagonal_to(q);
            }
            if any && all_diagonal {
                w.diagonal += 1;
            } else {
                w.axis += 1;
            }
        }
        w
    }

    pub fn total(self) -> f64 {
        self.axis as f64 + self.diagonal as f64 * std::f64::consts::SQRT_2
    }
}

pub fn overall_length(skeleton: &Skeleton, norm_area: f64) -> f64 {
    1e3 * PixelWeights::of(skeleton.raster()).total() / norm_area
}

pub fn overall_perimeter(edges: &EdgeMask, norm_area: f64) -> f64 {
    1e2 * PixelWeights::of(edges.raster()).total() / norm_area
}

pub fn overall_area(mask: &BinaryMask, norm_area: f64) -> f64 {
    1e2 * mask.vessel_count() as f64 / norm_area
}

pub fn geometry_biomarkers(
    mask: &BinaryMask,
    skeleton: &Skeleton,
    edges: &EdgeMask,
    norm_area: f64,
) -> GeometryBiomarkers {
    GeometryBiomarkers {
        ovlen: overall_length(skeleton, norm_area),
        ovper: overall_perimeter(edges, norm_area),
        ovarea: overall_area(mask, norm_area),
        norm_area,
    }
}
