use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to decode image {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("failed to encode image: {0}")]
    Encode(#[from] image::ImageError),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("measure undefined: {0}")]
    EmptyMeasure(String),

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),

    #[error("table serialization failed: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
