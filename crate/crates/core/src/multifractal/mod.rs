//! Box-counting multifractal analysis: generalized dimensions D0, D1, D2 and
//! the singularity spectrum, with rotation search over grid placements.

pub mod boxes;
pub mod dimension;
pub mod optimize;
pub mod regression;
pub mod rotate;

pub use boxes::{box_probabilities, BoxGridMeasure, ExclusionPolicy};
pub use dimension::{
    generalized_dimension, linear_box_sizes, singularity_spectrum, Estimate, GridSeries, Spectrum,
    SpectrumPoint, ALPHA_MAX_Q, ALPHA_MIN_Q, MIN_BOX_SIZES,
};
pub use optimize::{optimized_multifractal, GridMeasurement, MultifractalConfig, MultifractalResult};
pub use regression::{fit_line, LinearFit};
pub use rotate::rotate_nearest;
