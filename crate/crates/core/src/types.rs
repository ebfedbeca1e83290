//! Validated domain types shared by every module.
//!
//! All grids are row-major with the origin at the top-left pixel. Types are
//! immutable once constructed; constructors reject invariant violations with
//! an error naming the field and position.

use crate::error::{Error, Result};

/// Tolerance on the per-pixel sum of a probability map.
pub const PROB_SUM_TOLERANCE: f64 = 1e-4;

/// Largest class count a label map can carry (labels are stored as bytes).
pub const MAX_CLASSES: usize = 256;

fn check_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 {
        return Err(Error::invalid("height", "must be at least 1"));
    }
    if width == 0 {
        return Err(Error::invalid("width", "must be at least 1"));
    }
    Ok(())
}

fn check_classes(num_classes: usize) -> Result<()> {
    if !(2..=MAX_CLASSES).contains(&num_classes) {
        return Err(Error::invalid(
            "num_classes",
            format!("{num_classes} is outside [2, {MAX_CLASSES}]"),
        ));
    }
    Ok(())
}

/// Per-pixel class labels of a static scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticMap {
    height: usize,
    width: usize,
    num_classes: usize,
    labels: Vec<u8>,
}

impl SemanticMap {
    pub fn new(height: usize, width: usize, num_classes: usize, labels: Vec<u8>) -> Result<Self> {
        check_dims(height, width)?;
        check_classes(num_classes)?;
        if labels.len() != height * width {
            return Err(Error::mismatch("label count", height * width, labels.len()));
        }
        if let Some(i) = labels.iter().position(|&l| l as usize >= num_classes) {
            return Err(Error::LabelOutOfRange {
                row: i / width,
                col: i % width,
                label: labels[i] as u32,
                num_classes,
            });
        }
        Ok(Self {
            height,
            width,
            num_classes,
            labels,
        })
    }

    /// Map with every pixel set to `label`.
    pub fn filled(height: usize, width: usize, num_classes: usize, label: u8) -> Result<Self> {
        Self::new(height, width, num_classes, vec![label; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.labels[row * self.width + col]
    }

    /// Pixel count per class.
    pub fn class_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.num_classes];
        for &l in &self.labels {
            hist[l as usize] += 1;
        }
        hist
    }

    pub(crate) fn same_shape(&self, other: &SemanticMap) -> Result<()> {
        if (self.height, self.width) != (other.height, other.width) {
            return Err(Error::mismatch(
                "map dimensions",
                format!("{}x{}", self.height, self.width),
                format!("{}x{}", other.height, other.width),
            ));
        }
        if self.num_classes != other.num_classes {
            return Err(Error::mismatch("class count", self.num_classes, other.num_classes));
        }
        Ok(())
    }
}

/// Per-pixel class distribution, `K` values per pixel with class fastest-varying.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    height: usize,
    width: usize,
    num_classes: usize,
    probs: Vec<f32>,
}

impl ProbabilityMap {
    /// Validates range and normalisation. Maps that fail are rejected, never
    /// renormalised.
    pub fn new(height: usize, width: usize, num_classes: usize, probs: Vec<f32>) -> Result<Self> {
        check_dims(height, width)?;
        check_classes(num_classes)?;
        if probs.len() != height * width * num_classes {
            return Err(Error::mismatch(
                "probability count",
                height * width * num_classes,
                probs.len(),
            ));
        }
        for (pixel, dist) in probs.chunks_exact(num_classes).enumerate() {
            let (row, col) = (pixel / width, pixel % width);
            let mut sum = 0.0f64;
            for (class, &p) in dist.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::ProbabilityOutOfRange {
                        row,
                        col,
                        class,
                        value: p,
                    });
                }
                sum += p as f64;
            }
            if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
                return Err(Error::ProbabilityNotNormalized { row, col, sum });
            }
        }
        Ok(Self {
            height,
            width,
            num_classes,
            probs,
        })
    }

    /// Exact one-hot encoding of a label map.
    pub fn one_hot(map: &SemanticMap) -> Self {
        let k = map.num_classes();
        let mut probs = vec![0.0f32; map.labels().len() * k];
        for (i, &l) in map.labels().iter().enumerate() {
            probs[i * k + l as usize] = 1.0;
        }
        Self {
            height: map.height(),
            width: map.width(),
            num_classes: k,
            probs,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn probs(&self) -> &[f32] {
        &self.probs
    }

    /// Class distribution of one pixel.
    pub fn pixel(&self, row: usize, col: usize) -> &[f32] {
        let start = (row * self.width + col) * self.num_classes;
        &self.probs[start..start + self.num_classes]
    }
}

/// Label of the most probable class per pixel; ties go to the lowest class index.
pub fn argmax_map(probs: &ProbabilityMap) -> SemanticMap {
    let labels = probs
        .probs()
        .chunks_exact(probs.num_classes())
        .map(|dist| {
            let mut best = 0usize;
            for (c, &p) in dist.iter().enumerate().skip(1) {
                if p > dist[best] {
                    best = c;
                }
            }
            best as u8
        })
        .collect();
    SemanticMap {
        height: probs.height(),
        width: probs.width(),
        num_classes: probs.num_classes(),
        labels,
    }
}

/// 8-bit image, row-major with interleaved channels (1 = gray, 3 = RGB).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    height: usize,
    width: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(height: usize, width: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        check_dims(height, width)?;
        if channels != 1 && channels != 3 {
            return Err(Error::invalid(
                "channels",
                format!("{channels} is not 1 (gray) or 3 (RGB)"),
            ));
        }
        if samples.len() != height * width * channels {
            return Err(Error::mismatch(
                "sample count",
                height * width * channels,
                samples.len(),
            ));
        }
        Ok(Self {
            height,
            width,
            channels,
            samples,
        })
    }

    pub fn filled(height: usize, width: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(height, width, channels, vec![value; height * width * channels])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    pub(crate) fn same_shape(&self, other: &ImageBuffer) -> Result<()> {
        if (self.height, self.width) != (other.height, other.width) {
            return Err(Error::mismatch(
                "image dimensions",
                format!("{}x{}", self.height, self.width),
                format!("{}x{}", other.height, other.width),
            ));
        }
        if self.channels != other.channels {
            return Err(Error::mismatch("channel count", self.channels, other.channels));
        }
        Ok(())
    }
}

/// Binary pixel mask, e.g. the footprint of dynamic objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    height: usize,
    width: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(height: usize, width: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(height, width)?;
        if bits.len() != height * width {
            return Err(Error::mismatch("mask size", height * width, bits.len()));
        }
        Ok(Self { height, width, bits })
    }

    pub fn empty(height: usize, width: usize) -> Result<Self> {
        Self::new(height, width, vec![false; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Class frequencies of a training corpus plus the smoothing term of the
/// weighted cross entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    frequencies: Vec<f64>,
    epsilon: f64,
}

impl ClassStats {
    pub const DEFAULT_EPSILON: f64 = 0.02;

    pub fn new(frequencies: Vec<f64>, epsilon: f64) -> Result<Self> {
        check_classes(frequencies.len())?;
        if let Some(c) = frequencies
            .iter()
            .position(|r| !r.is_finite() || !(0.0..=1.0).contains(r))
        {
            return Err(Error::invalid(
                "frequencies",
                format!("r[{c}] = {} is outside [0, 1]", frequencies[c]),
            ));
        }
        let sum: f64 = frequencies.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::invalid(
                "frequencies",
                format!("sum {sum} differs from 1 by more than 1e-6"),
            ));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", format!("{epsilon} must be > 0")));
        }
        Ok(Self {
            frequencies,
            epsilon,
        })
    }

    /// Class proportions measured over a set of label maps.
    pub fn from_maps<'a>(maps: impl IntoIterator<Item = &'a SemanticMap>, epsilon: f64) -> Result<Self> {
        let mut counts: Vec<u64> = Vec::new();
        for map in maps {
            if counts.is_empty() {
                counts = vec![0; map.num_classes()];
            } else if counts.len() != map.num_classes() {
                return Err(Error::mismatch("class count", counts.len(), map.num_classes()));
            }
            for (acc, n) in counts.iter_mut().zip(map.class_histogram()) {
                *acc += n;
            }
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::invalid("frequencies", "no maps given"));
        }
        let freqs = counts.iter().map(|&n| n as f64 / total as f64).collect();
        Self::new(freqs, epsilon)
    }

    pub fn num_classes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Dense code vector (BoW histogram or SPM descriptor). Values are finite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector(Vec<f32>);

impl FeatureVector {
    pub fn new(values: Vec<f32>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                index,
                value: values[index],
            });
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f32> {
        self.0
    }

    /// Euclidean norm, accumulated in f64.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(h: usize, w: usize, k: usize, p: &[f32]) -> ProbabilityMap {
        ProbabilityMap::new(h, w, k, p.to_vec()).unwrap()
    }

    #[test]
    fn argmax_unique_max() {
        let m = argmax_map(&pm(1, 1, 3, &[0.1, 0.7, 0.2]));
        assert_eq!(m.labels(), &[1]);
        assert_eq!((m.height(), m.width(), m.num_classes()), (1, 1, 3));
    }

    #[test]
    fn argmax_tie_goes_to_lowest_class() {
        assert_eq!(argmax_map(&pm(1, 1, 2, &[0.5, 0.5])).labels(), &[0]);
    }

    #[test]
    fn argmax_one_hot_identity() {
        let labels = vec![2u8, 0, 1, 3];
        let map = SemanticMap::new(2, 2, 4, labels.clone()).unwrap();
        assert_eq!(argmax_map(&ProbabilityMap::one_hot(&map)).labels(), &labels[..]);
    }

    #[test]
    fn semantic_map_rejects_out_of_range_label_with_position() {
        let err = SemanticMap::new(2, 3, 4, vec![0, 1, 2, 3, 9, 0]).unwrap_err();
        match err {
            Error::LabelOutOfRange { row, col, label, .. } => assert_eq!((row, col, label), (1, 1, 9)),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn semantic_map_rejects_degenerate_shapes() {
        assert!(SemanticMap::new(0, 1, 2, vec![]).is_err());
        assert!(SemanticMap::new(1, 1, 1, vec![0]).is_err());
        assert!(SemanticMap::new(1, 2, 2, vec![0]).is_err());
    }

    #[test]
    fn probability_map_rejects_unnormalised_pixel() {
        let err = ProbabilityMap::new(1, 2, 2, vec![0.5, 0.5, 0.5, 0.6]).unwrap_err();
        assert!(matches!(err, Error::ProbabilityNotNormalized { row: 0, col: 1, .. }));
        let err = ProbabilityMap::new(1, 1, 2, vec![1.5, -0.5]).unwrap_err();
        assert!(matches!(err, Error::ProbabilityOutOfRange { class: 0, .. }));
        assert!(ProbabilityMap::new(1, 1, 2, vec![0.50004, 0.5]).is_ok());
    }

    #[test]
    fn image_buffer_checks_sample_count_and_channels() {
        assert!(ImageBuffer::new(2, 2, 3, vec![0; 12]).is_ok());
        assert!(ImageBuffer::new(2, 2, 3, vec![0; 11]).is_err());
        assert!(ImageBuffer::new(2, 2, 2, vec![0; 8]).is_err());
    }

    #[test]
    fn class_stats_validation() {
        assert!(ClassStats::new(vec![0.2, 0.8], 0.02).is_ok());
        assert!(ClassStats::new(vec![0.2, 0.7], 0.02).is_err());
        assert!(ClassStats::new(vec![0.2, 0.8], 0.0).is_err());
        assert!(ClassStats::new(vec![-0.2, 1.2], 0.02).is_err());
        let m = SemanticMap::new(1, 4, 2, vec![0, 1, 1, 1]).unwrap();
        let s = ClassStats::from_maps([&m], ClassStats::DEFAULT_EPSILON).unwrap();
        assert_eq!(s.frequencies(), &[0.25, 0.75]);
    }

    #[test]
    fn feature_vector_rejects_non_finite() {
        assert!(matches!(
            FeatureVector::new(vec![1.0, f32::NAN]),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(FeatureVector::new(vec![1.0, f32::INFINITY]).is_err());
    }
}
