//! Branching angles at vessel junctions.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::centroid::{components, PixelGraph};
use super::connectivity::{Link, NodeKind, VesselGraph};
use crate::morphology::Skeleton;
use crate::raster::Pixel;
use crate::stats::median;

/// How the direction of a daughter vessel is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmMode {
    /// Pixel this many steps along the segment, or its far end if shorter.
    Lookahead(usize),
    /// The far particular point of the segment.
    Endpoint,
}

impl Default for ArmMode {
    fn default() -> Self {
        ArmMode::Lookahead(5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleMeasurement {
    /// Junction representative.
    pub vertex: Pixel,
    /// Far particular points of the two daughter segments.
    pub arm_a: Pixel,
    pub arm_b: Pixel,
    /// Pixels the direction vectors point to.
    pub sample_a: Pixel,
    pub sample_b: Pixel,
    /// In `[0, 180]`.
    pub degrees: f64,
}

fn arm_sample(link: &Link, mode: ArmMode) -> Pixel {
    let last = link.path.len() - 1;
    match mode {
        ArmMode::Lookahead(k) => link.path[k.min(last)],
        ArmMode::Endpoint => link.path[last],
    }
}

/// Arm direction: from the junction pixel the segment leaves through to the
/// sampled pixel.
fn arm_direction(link: &Link, sample: Pixel) -> (f64, f64) {
    let start = link.path[0];
    (
        sample.row as f64 - start.row as f64,
        sample.col as f64 - start.col as f64,
    )
}

/// Angle at `origin` between the rays to `a` and `b`, in degrees.
pub fn angle_between(origin: (f64, f64), a: Pixel, b: Pixel) -> Option<f64> {
    let va = (a.row as f64 - origin.0, a.col as f64 - origin.1);
    let vb = (b.row as f64 - origin.0, b.col as f64 - origin.1);
    vector_angle(va, vb)
}

/// Angle between two vectors, in degrees; `None` if either is zero.
pub fn vector_angle(va: (f64, f64), vb: (f64, f64)) -> Option<f64> {
    let na = va.0.hypot(va.1);
    let nb = vb.0.hypot(vb.1);
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let cos = ((va.0 * vb.0 + va.1 * vb.1) / (na * nb)).clamp(-1.0, 1.0);
    Some(cos.acos().to_degrees())
}

/// Measures one angle per junction of degree three or more.
///
/// The junction's segments are ranked by the geodesic distance from the
/// component centroid to their far particular point. The nearest one is the
/// parent and is dropped; the angle is taken between the two farthest of the
/// rest. Each arm's direction runs from the junction pixel it leaves through
/// to its sampled pixel. Self-loops are not arms.
pub fn branching_angles(
    graph: &VesselGraph,
    skeleton: &Skeleton,
    mode: ArmMode,
) -> (Vec<AngleMeasurement>, Option<f64>) {
    let raster = skeleton.raster();
    let comps = components(raster);
    let mut cache: Vec<Option<(PixelGraph, Vec<u32>)>> = (0..comps.len()).map(|_| None).collect();

    let mut out = Vec::new();
    for node in graph.nodes.values() {
        if node.kind != NodeKind::Intersection {
            continue;
        }
        let arms: Vec<&Link> = graph.adjacency[&node.id]
            .iter()
            .filter(|l| l.to != node.id)
            .collect();
        if arms.len() < 3 {
            continue;
        }
        let (g, dist) = cache[node.component].get_or_insert_with(|| {
            let g = PixelGraph::new(raster, comps[node.component].clone());
            let source = g.pixels.binary_search(&graph.centroids[node.component]).unwrap();
            let mut dist = Vec::new();
            g.bfs(source, &mut dist, &mut VecDeque::new());
            (g, dist)
        });
        let geodesic = |p: Pixel| dist[g.pixels.binary_search(&p).unwrap()];

        let mut ranked: Vec<(u32, Pixel, usize)> = arms
            .iter()
            .enumerate()
            .map(|(i, l)| (geodesic(l.to), l.to, i))
            .collect();
        ranked.sort_unstable();
        let mut children = ranked[1..].to_vec();
        children.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let (la, lb) = (arms[children[0].2], arms[children[1].2]);
        let (sa, sb) = (arm_sample(la, mode), arm_sample(lb, mode));
        if let Some(degrees) = vector_angle(arm_direction(la, sa), arm_direction(lb, sb)) {
            out.push(AngleMeasurement {
                vertex: node.id,
                arm_a: la.to,
                arm_b: lb.to,
                sample_a: sa,
                sample_b: sb,
                degrees,
            });
        }
    }
    let values: Vec<f64> = out.iter().map(|a| a.degrees).collect();
    let med = median(&values);
    (out, med)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_connectivity, detect_particular_points};
    use crate::raster::{line_pixels, BitRaster};

    /// Junction at (40, 40); parent straight down, arms leave at `±half`
    /// degrees from straight up.
    fn y_shape(half: f64, arm: f64, stem: isize) -> Skeleton {
        let c = (40isize, 40isize);
        let mut px = line_pixels(c, (c.0 + stem, c.1));
        for sign in [-1.0, 1.0] {
            let t = (sign * half).to_radians();
            let end = (
                c.0 - (arm * t.cos()).round() as isize,
                c.1 + (arm * t.sin()).round() as isize,
            );
            px.extend(line_pixels(c, end));
        }
        let pixels = px.into_iter().map(|(r, c)| Pixel::new(r as usize, c as usize));
        Skeleton::from_raster(BitRaster::from_pixels(90, 90, pixels))
    }

    fn measure(s: &Skeleton, mode: ArmMode) -> (Vec<AngleMeasurement>, Option<f64>) {
        let g = build_connectivity(s, &detect_particular_points(s));
        branching_angles(&g, s, mode)
    }

    #[test]
    fn symmetric_y_is_ninety() {
        let (angles, med) = measure(&y_shape(45.0, 30.0, 15), ArmMode::default());
        assert_eq!(angles.len(), 1);
        assert!((med.unwrap() - 90.0).abs() <= 4.0, "{med:?}");
        assert_eq!(med, Some(angles[0].degrees));
    }

    #[test]
    fn t_junction_is_straight() {
        let (_, med) = measure(&y_shape(90.0, 30.0, 15), ArmMode::default());
        assert!((med.unwrap() - 180.0).abs() <= 4.0, "{med:?}");
    }

    #[test]
    fn parent_is_dropped() {
        let (angles, _) = measure(&y_shape(45.0, 30.0, 15), ArmMode::Endpoint);
        let a = angles[0];
        // Neither arm is the stem tip below the junction.
        assert!(a.arm_a.row < 40 && a.arm_b.row < 40);
        assert!((a.degrees - 90.0).abs() < 1.0);
    }

    #[test]
    fn no_junction_no_angle() {
        let px = (5..40).map(|c| Pixel::new(5, c));
        let s = Skeleton::from_raster(BitRaster::from_pixels(45, 10, px));
        let (angles, med) = measure(&s, ArmMode::default());
        assert!(angles.is_empty());
        assert_eq!(med, None);
    }

    #[test]
    fn angle_between_basics() {
        let o = (0.0, 0.0);
        let a = angle_between(o, Pixel::new(0, 5), Pixel::new(5, 0)).unwrap();
        assert!((a - 90.0).abs() < 1e-12);
        assert_eq!(angle_between((1.0, 1.0), Pixel::new(1, 1), Pixel::new(2, 2)), None);
    }
}
