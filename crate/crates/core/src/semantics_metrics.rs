//! Segmentation scores (PA, MPA, MIoU, FWIoU) and the class-weighted
//! cross entropy used to score probability maps against ground truth.

use crate::error::{Error, Result};
use crate::types::{ClassStats, ProbabilityMap, SemanticMap};

/// `counts[i * k + j]` = pixels whose ground truth is `i` and prediction is `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    num_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(num_classes: usize, counts: Vec<u64>) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::invalid("num_classes", "must be positive"));
        }
        if counts.len() != num_classes * num_classes {
            return Err(Error::mismatch(
                "confusion matrix size",
                num_classes * num_classes,
                counts.len(),
            ));
        }
        Ok(Self { num_classes, counts })
    }

    pub fn zeros(num_classes: usize) -> Self {
        Self {
            num_classes,
            counts: vec![0; num_classes * num_classes],
        }
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, gt: usize, pred: usize) -> u64 {
        self.counts[gt * self.num_classes + pred]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Ground-truth pixel count per class.
    pub fn row_sums(&self) -> Vec<u64> {
        self.counts
            .chunks_exact(self.num_classes)
            .map(|row| row.iter().sum())
            .collect()
    }

    /// Predicted pixel count per class.
    pub fn col_sums(&self) -> Vec<u64> {
        let k = self.num_classes;
        (0..k).map(|j| (0..k).map(|i| self.counts[i * k + j]).sum()).collect()
    }

    /// Accumulate another matrix (e.g. over a test set).
    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if other.num_classes != self.num_classes {
            return Err(Error::mismatch("class count", self.num_classes, other.num_classes));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }
}

pub fn confusion(gt: &SemanticMap, pred: &SemanticMap) -> Result<ConfusionMatrix> {
    gt.same_shape(pred)?;
    let k = gt.num_classes();
    let mut cm = ConfusionMatrix::zeros(k);
    for (&g, &p) in gt.labels().iter().zip(pred.labels()) {
        cm.counts[g as usize * k + p as usize] += 1;
    }
    Ok(cm)
}

/// Segmentation scores. Per-class entries are `None` where the ratio is 0/0:
/// IoU for a class absent from both ground truth and prediction, accuracy for
/// a class absent from the ground truth. Such classes are left out of the
/// MIoU and MPA means.
#[derive(Debug, Clone, PartialEq)]
pub struct SegScores {
    pub pa: f64,
    pub mpa: f64,
    pub miou: f64,
    pub fwiou: f64,
    pub per_class_iou: Vec<Option<f64>>,
    pub per_class_accuracy: Vec<Option<f64>>,
}

fn mean_defined(values: &[Option<f64>]) -> f64 {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    if defined.is_empty() {
        0.0
    } else {
        defined.iter().sum::<f64>() / defined.len() as f64
    }
}

pub fn seg_scores(cm: &ConfusionMatrix) -> Result<SegScores> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    let k = cm.num_classes();
    let rows = cm.row_sums();
    let cols = cm.col_sums();
    let total_f = total as f64;

    let mut trace = 0u64;
    let mut per_class_iou = Vec::with_capacity(k);
    let mut per_class_accuracy = Vec::with_capacity(k);
    let mut fwiou = 0.0;
    for c in 0..k {
        let tp = cm.get(c, c);
        trace += tp;
        let union = rows[c] + cols[c] - tp;
        let iou = (union > 0).then(|| tp as f64 / union as f64);
        if let Some(iou) = iou {
            fwiou += rows[c] as f64 * iou;
        }
        per_class_iou.push(iou);
        per_class_accuracy.push((rows[c] > 0).then(|| tp as f64 / rows[c] as f64));
    }

    Ok(SegScores {
        pa: trace as f64 / total_f,
        mpa: mean_defined(&per_class_accuracy),
        miou: mean_defined(&per_class_iou),
        fwiou: fwiou / total_f,
        per_class_iou,
        per_class_accuracy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Sum over all pixels, as for a training mini-batch.
    #[default]
    Sum,
    Mean,
}

/// How zero probabilities for the ground-truth class are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroProb {
    /// Return [`Error::NonFiniteLoss`].
    #[default]
    Reject,
    /// Raise probabilities below [`PROB_FLOOR`] to the floor.
    Clamp,
}

pub const PROB_FLOOR: f64 = 1e-12;

/// Class weight `1 / ln(r_c + 1 + eps)`; larger for rarer classes.
pub fn class_weight(stats: &ClassStats, class: usize) -> f64 {
    1.0 / (stats.frequencies()[class] + 1.0 + stats.epsilon()).ln()
}

/// Class-weighted cross entropy of `probs` against `gt`, natural log.
///
/// Each pixel contributes `-log(S[c]) / log(r_c + 1 + eps)` where `c` is its
/// ground-truth class.
pub fn weighted_ce(
    probs: &ProbabilityMap,
    gt: &SemanticMap,
    stats: &ClassStats,
    reduction: Reduction,
    zero: ZeroProb,
) -> Result<f64> {
    if (probs.height(), probs.width()) != (gt.height(), gt.width()) {
        return Err(Error::mismatch(
            "map dimensions",
            format!("{}x{}", probs.height(), probs.width()),
            format!("{}x{}", gt.height(), gt.width()),
        ));
    }
    if probs.num_classes() != gt.num_classes() {
        return Err(Error::mismatch("class count", probs.num_classes(), gt.num_classes()));
    }
    if stats.num_classes() != probs.num_classes() {
        return Err(Error::mismatch(
            "class statistics length",
            probs.num_classes(),
            stats.num_classes(),
        ));
    }

    let k = probs.num_classes();
    let weights: Vec<f64> = (0..k).map(|c| class_weight(stats, c)).collect();
    let mut sum = 0.0;
    for (i, (&label, dist)) in gt
        .labels()
        .iter()
        .zip(probs.probs().chunks_exact(k))
        .enumerate()
    {
        let c = label as usize;
        let mut p = dist[c] as f64;
        if p < PROB_FLOOR {
            match zero {
                ZeroProb::Clamp => p = PROB_FLOOR,
                ZeroProb::Reject if p == 0.0 => {
                    return Err(Error::NonFiniteLoss {
                        row: i / gt.width(),
                        col: i % gt.width(),
                        class: c,
                    })
                }
                ZeroProb::Reject => {}
            }
        }
        sum -= weights[c] * p.ln();
    }
    Ok(match reduction {
        Reduction::Sum => sum,
        Reduction::Mean => sum / gt.labels().len() as f64,
    })
}
