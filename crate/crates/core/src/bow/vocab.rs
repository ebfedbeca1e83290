use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::brief::{BinaryDescriptor, DESCRIPTOR_BITS};

/// Flat visual vocabulary: pairwise distinct binary centroids, optional idf
/// weights, and the seed that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<BinaryDescriptor>,
    idf: Option<Vec<f32>>,
    seed: u64,
}

impl Vocabulary {
    pub fn new(words: Vec<BinaryDescriptor>, idf: Option<Vec<f32>>, seed: u64) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::invalid("words", "vocabulary needs at least one word"));
        }
        let mut seen = HashSet::with_capacity(words.len());
        if let Some(i) = words.iter().position(|w| !seen.insert(*w)) {
            return Err(Error::invalid("words", format!("word {i} duplicates an earlier word")));
        }
        if let Some(idf) = &idf {
            if idf.len() != words.len() {
                return Err(Error::mismatch("idf length", words.len(), idf.len()));
            }
            if let Some(i) = idf.iter().position(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::invalid("idf", format!("entry {i} = {} is not >= 0", idf[i])));
            }
        }
        Ok(Self { words, idf, seed })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BinaryDescriptor] {
        &self.words
    }

    pub fn idf(&self) -> Option<&[f32]> {
        self.idf.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_idf(self, idf: Vec<f32>) -> Result<Self> {
        Self::new(self.words, Some(idf), self.seed)
    }
}

/// Index and distance of the closest word; ties go to the lowest index.
pub fn nearest_word(words: &[BinaryDescriptor], d: &BinaryDescriptor) -> (usize, u32) {
    let mut best = (0, u32::MAX);
    for (i, w) in words.iter().enumerate() {
        let dist = w.hamming(d);
        if dist < best.1 {
            best = (i, dist);
            if dist == 0 {
                break;
            }
        }
    }
    best
}

/// Descriptor with the largest distance to its nearest chosen centroid
/// (`min_dist`), lowest index on ties.
fn farthest(min_dist: &[u32]) -> usize {
    let mut best = 0;
    for (i, &d) in min_dist.iter().enumerate() {
        if d > min_dist[best] {
            best = i;
        }
    }
    best
}

fn update_min_dist(min_dist: &mut [u32], descriptors: &[BinaryDescriptor], centroid: &BinaryDescriptor) {
    for (m, d) in min_dist.iter_mut().zip(descriptors) {
        *m = (*m).min(d.hamming(centroid));
    }
}

fn majority(members: &[&BinaryDescriptor]) -> BinaryDescriptor {
    let mut ones = [0u32; DESCRIPTOR_BITS];
    for d in members {
        for (word_idx, &word) in d.0.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                ones[word_idx * 64 + b] += 1;
                w &= w - 1;
            }
        }
    }
    let n = members.len() as u32;
    let mut out = BinaryDescriptor::default();
    for (i, &c) in ones.iter().enumerate() {
        // ties resolve to 0
        out.set_bit(i, 2 * c > n);
    }
    out
}

/// k-majority clustering of binary descriptors under Hamming distance.
///
/// Initialisation picks a seeded random first centroid, then repeatedly the
/// descriptor farthest from all chosen centroids. Each iteration assigns every
/// descriptor to its nearest centroid (lowest index on ties) and replaces each
/// centroid by the per-bit majority of its members (ties give 0); empty
/// clusters keep their centroid. A centroid that collides with an earlier one
/// is replaced by the descriptor farthest from the current set. Stops when no
/// assignment changes or after `max_iters` iterations.
pub fn build_vocab(
    descriptors: &[BinaryDescriptor],
    num_words: usize,
    seed: u64,
    max_iters: usize,
) -> Result<Vocabulary> {
    if num_words == 0 {
        return Err(Error::invalid("num_words", "must be at least 1"));
    }
    if descriptors.len() < num_words {
        return Err(Error::NotEnoughDescriptors {
            what: "training",
            need: num_words,
            have: descriptors.len(),
        });
    }
    let distinct = descriptors.iter().collect::<HashSet<_>>().len();
    if distinct < num_words {
        return Err(Error::NotEnoughDescriptors {
            what: "distinct",
            need: num_words,
            have: distinct,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.random_range(0..descriptors.len());
    let mut centroids = vec![descriptors[first]];
    let mut min_dist = vec![u32::MAX; descriptors.len()];
    update_min_dist(&mut min_dist, descriptors, &centroids[0]);
    while centroids.len() < num_words {
        let next = descriptors[farthest(&min_dist)];
        update_min_dist(&mut min_dist, descriptors, &next);
        centroids.push(next);
    }

    let mut assignment = vec![usize::MAX; descriptors.len()];
    for _ in 0..max_iters {
        let mut changed = false;
        for (a, d) in assignment.iter_mut().zip(descriptors) {
            let (w, _) = nearest_word(&centroids, d);
            if *a != w {
                *a = w;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        let mut members: Vec<Vec<&BinaryDescriptor>> = vec![Vec::new(); num_words];
        for (&a, d) in assignment.iter().zip(descriptors) {
            members[a].push(d);
        }
        for (c, m) in centroids.iter_mut().zip(&members) {
            if !m.is_empty() {
                *c = majority(m);
            }
        }
        dedup_centroids(&mut centroids, descriptors);
    }

    Vocabulary::new(centroids, None, seed)
}

fn dedup_centroids(centroids: &mut [BinaryDescriptor], descriptors: &[BinaryDescriptor]) {
    let mut seen = HashSet::with_capacity(centroids.len());
    let dup: Vec<usize> = (0..centroids.len()).filter(|&i| !seen.insert(centroids[i])).collect();
    for i in dup {
        let mut min_dist = vec![u32::MAX; descriptors.len()];
        for (j, c) in centroids.iter().enumerate() {
            if j != i {
                update_min_dist(&mut min_dist, descriptors, c);
            }
        }
        // distinct descriptors >= W, so some descriptor is not yet a centroid
        centroids[i] = descriptors[farthest(&min_dist)];
    }
}

/// Inverse document frequency `max(0, ln(N / (1 + n_w)))`, where `n_w` counts
/// the training images (one descriptor set each) containing word `w`.
pub fn compute_idf(vocab: &Vocabulary, images: &[Vec<BinaryDescriptor>]) -> Vec<f32> {
    let mut doc_freq = vec![0u32; vocab.len()];
    for descs in images {
        let mut present = vec![false; vocab.len()];
        for d in descs {
            present[nearest_word(vocab.words(), d).0] = true;
        }
        for (n, p) in doc_freq.iter_mut().zip(present) {
            *n += p as u32;
        }
    }
    let n_images = images.len() as f64;
    doc_freq
        .iter()
        .map(|&n| (n_images / (1.0 + n as f64)).ln().max(0.0) as f32)
        .collect()
}
