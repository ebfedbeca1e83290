//! Multi-modal visual place recognition.
//!
//! Landmarks are described by two codes: a spatial-pyramid histogram of their
//! static semantic segmentation ([`spm`]) and a bag-of-visual-words histogram of
//! their static image ([`bow`]). [`retrieval`] fuses the two cosine similarities
//! with a weighted sum and ranks an index of reference landmarks.
//!
//! The crate also carries the evaluation side: segmentation scores
//! ([`semantics_metrics`]), image reconstruction scores ([`image_metrics`]),
//! recall@K, a procedural dataset generator with a perception-noise simulator
//! ([`synth`]) and the on-disk formats ([`io`]).

pub mod bow;
pub mod error;
pub mod experiment;
pub mod image_metrics;
pub mod io;
pub mod retrieval;
pub mod semantics_metrics;
pub mod spm;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use types::{argmax_map, ClassStats, FeatureVector, ImageBuffer, Mask, ProbabilityMap, SemanticMap};
