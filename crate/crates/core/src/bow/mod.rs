//! Bag-of-visual-words coding of static images.
//!
//! Pipeline: FAST-style segment-test corners ([`detect_keypoints`]), 256-bit
//! BRIEF-style descriptors over a box-smoothed patch ([`describe`]), a flat
//! vocabulary learned by k-majority clustering under Hamming distance
//! ([`build_vocab`]) and an L2-normalised word histogram ([`encode_bow`]).
//! Everything is deterministic given the inputs and the vocabulary seed; no
//! orientation or scale handling is done.

mod brief;
mod encode;
mod fast;
pub mod pattern;
mod vocab;

pub use brief::{describe, describe_all, BinaryDescriptor, DESCRIPTOR_BITS, DESCRIPTOR_BYTES};
pub use encode::{bow_histogram, encode_bow, extract_descriptors, BowCode, BowParams};
pub use fast::{detect_keypoints, Keypoint, PATCH_MARGIN};
pub use vocab::{build_vocab, compute_idf, nearest_word, Vocabulary};

use crate::error::Result;
use crate::types::ImageBuffer;

/// Luma conversion `round(0.299 R + 0.587 G + 0.114 B)`; grayscale passes through.
pub fn to_gray(img: &ImageBuffer) -> Result<ImageBuffer> {
    if img.is_gray() {
        return Ok(img.clone());
    }
    let samples = img
        .samples()
        .chunks_exact(3)
        .map(|p| {
            let y = 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64;
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    ImageBuffer::new(img.height(), img.width(), 1, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_passthrough() {
        let img = ImageBuffer::new(1, 3, 1, vec![1, 2, 3]).unwrap();
        assert_eq!(to_gray(&img).unwrap(), img);
    }

    #[test]
    fn luma_weights() {
        let img = ImageBuffer::new(1, 3, 3, vec![255, 255, 255, 255, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(to_gray(&img).unwrap().samples(), &[255, 76, 0]);
    }
}
