//! Unsupervised word segmentation of self-supervised speech frame embeddings.
//!
//! The pipeline thresholds temporal gradient magnitudes into pseudo-labels,
//! fits a linear frame classifier on them, and picks word boundaries from the
//! classifier score with a greedy non-maxima suppression. The numerical core
//! is generic over [`Scalar`]; the aliases below fix the precisions used by
//! the on-disk formats (`f32` features) and by training (`f64`).

pub mod classifier;
pub mod error;
pub mod gradient;
pub mod io;
pub mod metrics;
pub mod nms;
pub mod pipeline;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Frame embeddings as stored on disk.
pub type Frames = io::FrameSequence<f32>;
/// Frame embeddings promoted to training precision.
pub type Frames64 = io::FrameSequence<f64>;
/// Linear frame classifier at training precision.
pub type Model = classifier::LinearModel<f64>;
/// Stacked training frames at training precision.
pub type TrainingSet = classifier::TrainingSet<f64>;
/// Per-frame gradient magnitudes at training precision.
pub type Magnitudes = gradient::GradientMagnitudes<f64>;
/// Pseudo-label threshold at training precision.
pub type Threshold = gradient::Threshold<f64>;

/// Version string written into model files.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
