use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?} (width, height), got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("class count mismatch: {left} vs {right}")]
    ClassCountMismatch { left: u16, right: u16 },

    #[error("class id {id} at ({row}, {col}) outside [1, {num_classes}]")]
    ClassOutOfRange {
        row: usize,
        col: usize,
        id: u16,
        num_classes: u16,
    },

    #[error("non-finite score for class {class} at ({row}, {col})")]
    NonFiniteScore { row: usize, col: usize, class: u16 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("perturbed prediction list is empty")]
    EmptyPerturbedSet,

    #[error("robustness ratio undefined: the clean prediction has no correct pixel")]
    NoCorrectPixels,

    #[error("filter side {k} does not fit an image whose smaller side is {max}")]
    FilterTooLarge { k: usize, max: usize },

    #[error("critical region resolves to zero area on a {width}x{height} image")]
    DegenerateRegion { width: usize, height: usize },

    #[error("critical region {0} lies outside the image bounds")]
    RegionOutOfBounds(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("pixel value {value} at ({row}, {col}) has no class mapping")]
    UnmappedValue { row: usize, col: usize, value: String },

    #[error("malformed report: {0}")]
    Report(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn image(path: impl Into<PathBuf>, source: image::ImageError) -> Self {
        Error::Image {
            path: path.into(),
            source,
        }
    }
}
