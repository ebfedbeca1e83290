//! End-to-end pipelines shared by the command-line tool and the test suites:
//! perception source selection, vocabulary training, index construction,
//! query encoding, recall evaluation and the coding-time benchmark.

use std::time::Instant;

use crate::bow::{self, BowParams, Vocabulary};
use crate::error::{Error, Result};
use crate::retrieval::{eval_recall, FusionConfig, LandmarkCodes, LandmarkIndex, RecallReport};
use crate::spm::{encode_spm, SpmConfig};
use crate::synth::{degrade, LandmarkSample, NoiseSpec};
use crate::types::{argmax_map, ImageBuffer, SemanticMap};

/// Where the semantic map and image of a landmark come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perception {
    /// Ground-truth static semantics and static image.
    GroundTruth,
    /// Static semantics with the dynamic frame as the image.
    Dynamic,
    /// Output of the noise simulator, with the given seed.
    Degraded { noise: NoiseSpec, seed: u64 },
}

impl Perception {
    pub fn perceive(&self, sample: &LandmarkSample) -> Result<(SemanticMap, ImageBuffer)> {
        match self {
            Perception::GroundTruth => Ok((sample.static_semantics.clone(), sample.static_image.clone())),
            Perception::Dynamic => Ok((sample.static_semantics.clone(), sample.dynamic_image.clone())),
            Perception::Degraded { noise, seed } => {
                let (probs, image) = degrade(sample, noise, *seed)?;
                Ok((argmax_map(&probs), image))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VocabSettings {
    pub num_words: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub idf: bool,
    pub bow: BowParams,
}

impl Default for VocabSettings {
    fn default() -> Self {
        Self {
            num_words: 1000,
            seed: 0,
            max_iters: 50,
            idf: false,
            bow: BowParams::default(),
        }
    }
}

/// Learn a vocabulary from the images `perception` yields for `samples`.
pub fn train_vocab(samples: &[LandmarkSample], perception: &Perception, settings: &VocabSettings) -> Result<Vocabulary> {
    let per_image = samples
        .iter()
        .map(|s| {
            let (_, image) = perception.perceive(s)?;
            bow::extract_descriptors(&image, &settings.bow)
        })
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<_> = per_image.iter().flatten().copied().collect();
    let vocab = bow::build_vocab(&all, settings.num_words, settings.seed, settings.max_iters)?;
    if settings.idf {
        let idf = bow::compute_idf(&vocab, &per_image);
        vocab.with_idf(idf)
    } else {
        Ok(vocab)
    }
}

/// Both coders with their settings.
#[derive(Debug, Clone)]
pub struct Encoder {
    pub vocab: Vocabulary,
    pub spm: SpmConfig,
    pub bow: BowParams,
    pub use_idf: bool,
}

impl Encoder {
    pub fn new(vocab: Vocabulary, spm: SpmConfig, bow: BowParams, use_idf: bool) -> Result<Self> {
        if use_idf && vocab.idf().is_none() {
            return Err(Error::invalid("use_idf", "vocabulary carries no idf weights"));
        }
        Ok(Self { vocab, spm, bow, use_idf })
    }

    pub fn encode(&self, map: &SemanticMap, image: &ImageBuffer) -> Result<LandmarkCodes> {
        let g = bow::encode_bow(image, &self.vocab, self.use_idf, &self.bow)?;
        let h = encode_spm(map, &self.spm)?;
        Ok(LandmarkCodes::new(g, h))
    }

    pub fn with_levels(&self, levels: usize) -> Result<Self> {
        Ok(Self {
            spm: SpmConfig::new(levels, self.spm.num_classes())?,
            ..self.clone()
        })
    }
}

pub fn encode_samples(samples: &[LandmarkSample], encoder: &Encoder, perception: &Perception) -> Result<Vec<(LandmarkCodes, u64)>> {
    samples
        .iter()
        .map(|s| {
            let (map, image) = perception.perceive(s)?;
            Ok((encoder.encode(&map, &image)?, s.id))
        })
        .collect()
}

pub fn build_index(samples: &[LandmarkSample], encoder: &Encoder, perception: &Perception) -> Result<LandmarkIndex> {
    let mut index = LandmarkIndex::new(encoder.vocab.len(), encoder.spm);
    for (codes, id) in encode_samples(samples, encoder, perception)? {
        index.insert(id, codes)?;
    }
    Ok(index)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub levels: usize,
    pub recall: RecallReport,
    /// Mean over queries of the per-query median coding time.
    pub mean_coding_ms: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Recall and coding time for each pyramid height in `levels`.
///
/// The index is built from ground truth; queries come from `queries`.
/// Perception runs outside the timed region. Timing covers BoW plus SPM
/// coding of one query: one warm-up pass (whose codes feed the recall
/// evaluation), then `repetitions` timed passes with the levels interleaved so
/// machine drift hits every level alike. Per query the median is taken, then
/// the mean over queries.
pub fn bench_coding(
    samples: &[LandmarkSample],
    encoder: &Encoder,
    levels: &[usize],
    repetitions: usize,
    queries: &Perception,
    fusion: &FusionConfig,
) -> Result<Vec<BenchRow>> {
    if repetitions == 0 {
        return Err(Error::invalid("repetitions", "must be at least 1"));
    }
    let perceived = samples
        .iter()
        .map(|s| Ok((queries.perceive(s)?, s.id)))
        .collect::<Result<Vec<_>>>()?;
    let encoders = levels.iter().map(|&l| encoder.with_levels(l)).collect::<Result<Vec<_>>>()?;

    let mut coded = vec![Vec::with_capacity(perceived.len()); encoders.len()];
    for ((map, image), id) in &perceived {
        for (enc, out) in encoders.iter().zip(&mut coded) {
            out.push((enc.encode(map, image)?, *id));
        }
    }

    let mut total_ms = vec![0.0; encoders.len()];
    let mut times = vec![Vec::with_capacity(repetitions); encoders.len()];
    for ((map, image), _) in &perceived {
        times.iter_mut().for_each(Vec::clear);
        for _ in 0..repetitions {
            for (enc, t) in encoders.iter().zip(&mut times) {
                let start = Instant::now();
                let codes = enc.encode(map, image)?;
                t.push(start.elapsed().as_secs_f64() * 1e3);
                std::hint::black_box(codes);
            }
        }
        for (total, t) in total_ms.iter_mut().zip(&mut times) {
            *total += median(t);
        }
    }

    let mut rows = Vec::with_capacity(encoders.len());
    for ((enc, coded), total) in encoders.iter().zip(&coded).zip(total_ms) {
        let index = build_index(samples, enc, &Perception::GroundTruth)?;
        rows.push(BenchRow {
            levels: enc.spm.levels(),
            recall: eval_recall(&index, coded, fusion, &[])?,
            mean_coding_ms: total / perceived.len().max(1) as f64,
        });
    }
    Ok(rows)
}
