//! Retinal vasculature biomarkers from binary vessel segmentation masks.
//!
//! The pipeline thins a mask to a one-pixel skeleton, measures geometry on
//! the mask, skeleton and edges, builds the segment graph between endpoints
//! and junctions for the topology biomarkers, and runs a box-counting
//! multifractal analysis on the mask. [`compute_all`] does all of it for one
//! network and returns a [`BiomarkerReport`].

pub mod error;
pub mod geometry;
pub mod graph;
pub mod mask_io;
pub mod morphology;
pub mod multifractal;
pub mod raster;
pub mod report;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{geometry_biomarkers, GeometryBiomarkers, REFERENCE_AREA};
pub use graph::{analyze_topology, ArmMode, TopologyBiomarkers, VesselGraph};
pub use mask_io::{load_mask, render_overlay, save_mask, BinaryMask, OverlayImage, DEFAULT_THRESHOLD};
pub use morphology::{extract_edges, skeletonize, EdgeMask, Skeleton};
pub use multifractal::{optimized_multifractal, MultifractalConfig, MultifractalResult};
pub use raster::{BitRaster, Pixel};
pub use report::{
    analyze, compute_all, derive_seed, parse_report, parse_table, reports_to_table, serialize_report,
    Analysis, Biomarker, BiomarkerReport, NetworkKind, NormMode, PipelineConfig, TableRow, TOOLBOX_VERSION,
};
pub use stats::{compare_groups, rank_test, summarize, GroupSummary, Summary};
