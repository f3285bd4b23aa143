//! Randomized stain normalization and augmentation for histology patches.
//!
//! Images are summarized by per-channel mean and standard deviation in LAB,
//! HSV or HED. A corpus of such descriptors is fitted to a diagonal
//! hyper-distribution per color space; at transform time a virtual template
//! is drawn from it and every image is moment-matched to its own fresh
//! template. Fixed-template normalization and two noise-based augmentation
//! baselines share the same machinery.

pub mod augment;
pub mod cli;
pub mod colorspace;
pub mod error;
pub mod io;
pub mod normalizer;
pub mod pipeline;
pub mod sampler;
pub mod stats;
pub mod statsfile;
pub mod synth;

pub use augment::{sa1, sa2, Interval, SaConfig, SaScheme, Strength};
pub use colorspace::{ColorSpace, PlaneImage, RgbImage};
pub use error::{Error, Result};
pub use normalizer::{normalize_to_template, reinhard_normalize, NormalizeOutcome};
pub use pipeline::{transform, transform_batch, Mode, PipelineConfig, SpaceProbs, TransformOutcome};
pub use sampler::{sample_template, StainRng, VirtualTemplate};
pub use stats::{channel_stats, fit_style_distribution, ChannelStats, DistributionFamily, StyleDistribution};
