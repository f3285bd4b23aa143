use std::path::PathBuf;

use crate::colorspace::ColorSpace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("mixed color spaces: expected {expected}, found {found}")]
    MixedColorSpace {
        expected: ColorSpace,
        found: ColorSpace,
    },
    #[error("insufficient samples: need at least {needed}, got {found}")]
    InsufficientSamples { needed: usize, found: usize },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("no fitted distribution for color space {0}")]
    MissingDistribution(ColorSpace),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("statistics file: {0}")]
    StatsFormat(String),
    #[error("statistics file version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("style csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("failed to write to sink: {0}")]
    SinkWrite(std::io::Error),
    #[error("{}: {source}", path.display())]
    Decode {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error("{}: {source}", path.display())]
    Encode {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("item {index}: {source}")]
    Item { index: usize, source: Box<Error> },
}
