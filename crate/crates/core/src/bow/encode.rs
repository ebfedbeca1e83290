use crate::error::{Error, Result};
use crate::types::{FeatureVector, ImageBuffer};

use super::brief::{describe_all, BinaryDescriptor};
use super::fast::detect_keypoints;
use super::vocab::{nearest_word, Vocabulary};

/// Detection settings shared by vocabulary training and encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BowParams {
    pub max_keypoints: usize,
    pub threshold: u8,
}

impl Default for BowParams {
    fn default() -> Self {
        Self {
            max_keypoints: 500,
            threshold: 20,
        }
    }
}

/// L2-normalised visual-word histogram; all zeros when the image had no keypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct BowCode(FeatureVector);

impl BowCode {
    pub const NORM_TOLERANCE: f64 = 1e-6;

    pub fn new(vector: FeatureVector) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::invalid("BoW code", "empty vector"));
        }
        if !vector.is_zero() {
            let norm = vector.norm();
            if (norm - 1.0).abs() > Self::NORM_TOLERANCE {
                return Err(Error::invalid("BoW code", format!("norm {norm} is neither 0 nor 1")));
            }
        }
        Ok(Self(vector))
    }

    pub fn vector(&self) -> &FeatureVector {
        &self.0
    }

    pub fn into_vector(self) -> FeatureVector {
        self.0
    }
}

pub fn extract_descriptors(img: &ImageBuffer, params: &BowParams) -> Result<Vec<BinaryDescriptor>> {
    let keypoints = detect_keypoints(img, params.max_keypoints, params.threshold)?;
    describe_all(img, &keypoints)
}

/// Histogram of nearest words, optionally idf-weighted, then L2-normalised.
pub fn bow_histogram(descriptors: &[BinaryDescriptor], vocab: &Vocabulary, use_idf: bool) -> Result<BowCode> {
    let idf = match (use_idf, vocab.idf()) {
        (false, _) => None,
        (true, Some(idf)) => Some(idf),
        (true, None) => return Err(Error::invalid("use_idf", "vocabulary carries no idf weights")),
    };
    let mut hist = vec![0f64; vocab.len()];
    for d in descriptors {
        hist[nearest_word(vocab.words(), d).0] += 1.0;
    }
    if let Some(idf) = idf {
        for (h, &w) in hist.iter_mut().zip(idf) {
            *h *= w as f64;
        }
    }
    let norm = hist.iter().map(|v| v * v).sum::<f64>().sqrt();
    let values = if norm > 0.0 {
        hist.iter().map(|v| (v / norm) as f32).collect()
    } else {
        vec![0.0; vocab.len()]
    };
    BowCode::new(FeatureVector::new(values)?)
}

/// Detect, describe, quantise and normalise.
pub fn encode_bow(img: &ImageBuffer, vocab: &Vocabulary, use_idf: bool, params: &BowParams) -> Result<BowCode> {
    bow_histogram(&extract_descriptors(img, params)?, vocab, use_idf)
}
