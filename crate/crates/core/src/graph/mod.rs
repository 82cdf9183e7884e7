//! Particular points, the segment graph between them, and the topology
//! biomarkers computed on it.

mod angles;
mod centroid;
mod connectivity;
mod points;
mod tortuosity;

use serde::{Deserialize, Serialize};

pub use angles::{angle_between, branching_angles, vector_angle, AngleMeasurement, ArmMode};
pub use centroid::compute_centroid;
pub use connectivity::{build_connectivity, Link, Node, NodeKind, Segment, VesselGraph};
pub use points::{
    detect_particular_points, kernel_response, Junction, ParticularPoints, ENDPOINT_RESPONSE,
    INTERSECTION_RESPONSE,
};
pub use tortuosity::{median_tortuosity, path_length, segment_tortuosity, MIN_CHORD};

use crate::morphology::Skeleton;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologyBiomarkers {
    pub end_count: usize,
    /// Junctions after merging adjacent intersection pixels.
    pub inter_count: usize,
    pub median_tortuosity: Option<f64>,
    pub median_branching_angle: Option<f64>,
}

/// Everything the topology stage produces, kept for overlays.
#[derive(Debug, Clone)]
pub struct TopologyAnalysis {
    pub points: ParticularPoints,
    pub graph: VesselGraph,
    pub angles: Vec<AngleMeasurement>,
    pub biomarkers: TopologyBiomarkers,
}

pub fn analyze_topology(skeleton: &Skeleton, mode: ArmMode) -> TopologyAnalysis {
    let points = detect_particular_points(skeleton);
    let graph = build_connectivity(skeleton, &points);
    let tortuosity = median_tortuosity(&graph);
    let (angles, branching) = branching_angles(&graph, skeleton, mode);
    let inter_count = graph
        .nodes
        .values()
        .filter(|n| n.kind == NodeKind::Intersection)
        .count();
    let biomarkers = TopologyBiomarkers {
        end_count: points.endpoints.len(),
        inter_count,
        median_tortuosity: tortuosity,
        median_branching_angle: branching,
    };
    TopologyAnalysis {
        points,
        graph,
        angles,
        biomarkers,
    }
}

pub fn topology_biomarkers(skeleton: &Skeleton) -> TopologyBiomarkers {
    analyze_topology(skeleton, ArmMode::default()).biomarkers
}
