//! Arc-chord tortuosity of skeleton segments.

use super::connectivity::{Segment, VesselGraph};
use crate::raster::Pixel;
use crate::stats::median;

/// Segments whose ends are closer than this carry no usable chord.
pub const MIN_CHORD: f64 = 2.0;

/// Length of a pixel chain: 1 per axis step, √2 per diagonal step.
///
/// Steps are counted before being weighted, so the result does not depend
/// on the direction the chain is walked.
pub fn path_length(path: &[Pixel]) -> f64 {
    let (mut axis, mut diagonal) = (0usize, 0usize);
    for w in path.windows(2) {
        if w[0].is_diagonal_to(w[1]) {
            diagonal += 1;
        } else {
            axis += 1;
        }
    }
    axis as f64 + diagonal as f64 * std::f64::consts::SQRT_2
}

/// Arc over chord for one segment, or `None` when the chord is shorter than
/// [`MIN_CHORD`].
pub fn segment_tortuosity(segment: &Segment) -> Option<f64> {
    let (first, last) = (segment.path.first()?, segment.path.last()?);
    let chord = first.distance(*last);
    (chord >= MIN_CHORD).then(|| path_length(&segment.path) / chord)
}

/// Median over all eligible segments; `None` when there are none.
pub fn median_tortuosity(graph: &VesselGraph) -> Option<f64> {
    let values: Vec<f64> = graph.segments.iter().filter_map(segment_tortuosity).collect();
    median(&values)
}
