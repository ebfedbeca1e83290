use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vpr_core::bow::BowParams;
use vpr_core::experiment::Perception;
use vpr_core::synth::{NoiseSpec, VisualSource};

#[derive(Debug, Parser)]
#[command(name = "vpr", version, about = "Semantic + visual place recognition pipelines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a synthetic street-scene dataset.
    Synth(SynthArgs),
    /// Write a copy of a dataset with simulated perception output as its static layer.
    Degrade(DegradeArgs),
    /// Train a binary visual vocabulary.
    BuildVocab(BuildVocabArgs),
    /// Encode every landmark of a dataset into an index file.
    Index(IndexArgs),
    /// Rank the index against one query.
    Query(QueryArgs),
    /// Recall@k of a query set against an index.
    EvalRecall(EvalRecallArgs),
    /// Segmentation scores of predicted label maps.
    EvalSeg(EvalSegArgs),
    /// Image similarity scores of candidate images.
    EvalImg(EvalImgArgs),
    /// Recall and coding time for several pyramid heights.
    BenchCoding(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Static semantics and static image.
    GroundTruth,
    /// Static semantics with the dynamic frame.
    Dynamic,
    /// Noise-simulator output (see the noise flags).
    Degraded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Visual {
    Static,
    Dynamic,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NoiseArgs {
    /// Probability of replacing a pixel label with a random other class.
    #[arg(long, default_value_t = 0.0)]
    pub label_flip_p: f64,
    /// Weight of the uniform distribution mixed into the label distribution.
    #[arg(long, default_value_t = 0.0)]
    pub prob_temperature: f64,
    /// Standard deviation of additive Gaussian image noise, in intensity levels.
    #[arg(long, default_value_t = 0.0)]
    pub image_noise_sigma: f64,
    /// Blur the recovered image inside the dynamic-object mask.
    #[arg(long)]
    pub artifact_blur: bool,
    /// Image the degraded visual input starts from.
    #[arg(long, value_enum, default_value_t = Visual::Static)]
    pub visual_source: Visual,
}

impl NoiseArgs {
    pub fn spec(&self) -> NoiseSpec {
        NoiseSpec {
            label_flip_p: self.label_flip_p,
            prob_temperature: self.prob_temperature,
            image_noise_sigma: self.image_noise_sigma,
            artifact_blur: self.artifact_blur,
            visual_source: match self.visual_source {
                Visual::Static => VisualSource::Static,
                Visual::Dynamic => VisualSource::Dynamic,
            },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PerceptionArgs {
    #[arg(long, value_enum, default_value_t = Source::GroundTruth)]
    pub source: Source,
    /// Seed for the noise simulator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

impl PerceptionArgs {
    pub fn perception(&self) -> vpr_core::Result<Perception> {
        Ok(match self.source {
            Source::GroundTruth => Perception::GroundTruth,
            Source::Dynamic => Perception::Dynamic,
            Source::Degraded => {
                let noise = self.noise.spec();
                noise.validate()?;
                Perception::Degraded { noise, seed: self.seed }
            }
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DetectorArgs {
    /// Strongest keypoints kept per image.
    #[arg(long, default_value_t = 500)]
    pub max_keypoints: usize,
    /// FAST intensity threshold.
    #[arg(long, default_value_t = 20)]
    pub fast_threshold: u8,
}

impl DetectorArgs {
    pub fn params(&self) -> BowParams {
        BowParams {
            max_keypoints: self.max_keypoints,
            threshold: self.fast_threshold,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 128)]
    pub height: usize,
    #[arg(long, default_value_t = 128)]
    pub width: usize,
    #[arg(long, default_value_t = 8)]
    pub classes: usize,
    #[arg(long, default_value_t = 200)]
    pub landmarks: usize,
    #[arg(long, default_value_t = 1)]
    pub dynamic_min: usize,
    #[arg(long, default_value_t = 6)]
    pub dynamic_max: usize,
    /// Do not draw sprite shadows.
    #[arg(long)]
    pub no_shadow: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DegradeArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BuildVocabArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Vocabulary size.
    #[arg(long, default_value_t = 1000)]
    pub words: usize,
    /// Clustering seed.
    #[arg(long = "vocab-seed", default_value_t = 0)]
    pub vocab_seed: u64,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
    /// Store idf weights with the vocabulary.
    #[arg(long)]
    pub idf: bool,
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[command(flatten)]
    pub perception: PerceptionArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EncoderArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    /// Apply the vocabulary's idf weights.
    #[arg(long)]
    pub idf: bool,
    #[command(flatten)]
    pub detector: DetectorArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IndexArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Pyramid height L.
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    #[command(flatten)]
    pub perception: PerceptionArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QueryArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    /// Dataset holding the query landmark (with --landmark).
    #[arg(long, requires = "landmark", conflicts_with_all = ["labels", "image"])]
    pub dataset: Option<PathBuf>,
    #[arg(long, requires = "dataset")]
    pub landmark: Option<u64>,
    /// Query label map (PGM), used with --image.
    #[arg(long, requires = "image")]
    pub labels: Option<PathBuf>,
    /// Query image (PGM or PPM), used with --labels.
    #[arg(long, requires = "labels")]
    pub image: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[command(flatten)]
    pub perception: PerceptionArgs,
    /// Also write the ranking as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalRecallArgs {
    #[arg(long)]
    pub index: PathBuf,
    /// Dataset of queries; landmark ids are the ground-truth matches.
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Cutoffs reported in addition to 1, 5, 10 and the top-1% cutoff.
    #[arg(long, value_delimiter = ',')]
    pub cutoffs: Vec<usize>,
    #[command(flatten)]
    pub perception: PerceptionArgs,
    /// Write the full recall curve as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalSegArgs {
    /// Dataset with ground-truth label maps.
    #[arg(long)]
    pub gt: PathBuf,
    /// Dataset with predicted label maps and probabilities.
    #[arg(long)]
    pub pred: PathBuf,
    /// Epsilon in the class weighting of the cross entropy.
    #[arg(long, default_value_t = vpr_core::ClassStats::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Write per-class scores as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageRole {
    Static,
    Dynamic,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalImgArgs {
    /// Dataset with reference images.
    #[arg(long)]
    pub reference: PathBuf,
    /// Dataset with candidate images.
    #[arg(long)]
    pub candidate: PathBuf,
    #[arg(long, value_enum, default_value_t = ImageRole::Static)]
    pub reference_role: ImageRole,
    #[arg(long, value_enum, default_value_t = ImageRole::Static)]
    pub candidate_role: ImageRole,
    /// Write per-landmark scores as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    /// Pyramid heights to compare.
    #[arg(long, value_delimiter = ',', default_value = "0,2,4,6")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[command(flatten)]
    pub perception: PerceptionArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
