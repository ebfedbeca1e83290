//! Landmark index, decision-level fusion and recall evaluation.
//!
//! The fused similarity of a query `q` and landmark `l` is
//! `alpha * cos(g_q, g_l) + (1 - alpha) * cos(h_q, h_l)` where `g` is the BoW
//! code and `h` the SPM code. Cosine treats two zero vectors as identical (1)
//! and a zero against a non-zero vector as unrelated (0). Queries scan the
//! whole index; ties are broken by ascending landmark id.

use std::collections::BTreeMap;

use crate::bow::BowCode;
use crate::error::{Error, Result};
use crate::spm::{SpmCode, SpmConfig};

/// The two codes describing one image.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkCodes {
    pub g: BowCode,
    pub h: SpmCode,
}

impl LandmarkCodes {
    pub fn new(g: BowCode, h: SpmCode) -> Self {
        Self { g, h }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkEntry {
    pub id: u64,
    pub codes: LandmarkCodes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    alpha: f64,
}

impl FusionConfig {
    pub const DEFAULT_ALPHA: f64 = 0.5;

    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid("alpha", format!("{alpha} is outside [0, 1]")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            alpha: Self::DEFAULT_ALPHA,
        }
    }
}

fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x as f64 * y as f64).sum()
}

fn norm(a: &[f32]) -> f64 {
    dot(a, a).sqrt()
}

fn cosine_with_norms(a: &[f32], na: f64, b: &[f32], nb: f64) -> f64 {
    match (na == 0.0, nb == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => (dot(a, b) / (na * nb)).clamp(-1.0, 1.0),
    }
}

/// Cosine similarity with the zero-vector convention described above.
pub fn cosine(a: &[f32], b: &[f32]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::mismatch("vector length", a.len(), b.len()));
    }
    Ok(cosine_with_norms(a, norm(a), b, norm(b)))
}

pub fn fused_similarity(q: &LandmarkCodes, l: &LandmarkCodes, cfg: &FusionConfig) -> Result<f64> {
    let visual = cosine(q.g.vector().values(), l.g.vector().values())?;
    let semantic = cosine(q.h.vector().values(), l.h.vector().values())?;
    Ok(cfg.alpha * visual + (1.0 - cfg.alpha) * semantic)
}

#[derive(Debug, Clone)]
struct Stored {
    codes: LandmarkCodes,
    g_norm: f64,
    h_norm: f64,
}

/// Reference landmarks keyed by id. All entries share the BoW dimension and
/// the SPM configuration.
#[derive(Debug, Clone)]
pub struct LandmarkIndex {
    g_dim: usize,
    spm: SpmConfig,
    entries: BTreeMap<u64, Stored>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ranked {
    pub id: u64,
    pub score: f64,
}

impl LandmarkIndex {
    pub fn new(g_dim: usize, spm: SpmConfig) -> Self {
        Self {
            g_dim,
            spm,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(g_dim: usize, spm: SpmConfig, entries: impl IntoIterator<Item = LandmarkEntry>) -> Result<Self> {
        let mut index = Self::new(g_dim, spm);
        for e in entries {
            index.insert(e.id, e.codes)?;
        }
        Ok(index)
    }

    pub fn g_dim(&self) -> usize {
        self.g_dim
    }

    pub fn h_dim(&self) -> usize {
        self.spm.code_len()
    }

    pub fn spm_config(&self) -> SpmConfig {
        self.spm
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.entries.contains_key(&id)
    }

    pub fn get(&self, id: u64) -> Option<&LandmarkCodes> {
        self.entries.get(&id).map(|s| &s.codes)
    }

    /// Entries in ascending id order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &LandmarkCodes)> {
        self.entries.iter().map(|(&id, s)| (id, &s.codes))
    }

    pub(crate) fn check_codes(&self, codes: &LandmarkCodes) -> Result<()> {
        if codes.g.vector().len() != self.g_dim {
            return Err(Error::mismatch("BoW dimension", self.g_dim, codes.g.vector().len()));
        }
        if codes.h.config() != self.spm {
            return Err(Error::mismatch(
                "SPM configuration",
                format!("L={} K={}", self.spm.levels(), self.spm.num_classes()),
                format!("L={} K={}", codes.h.config().levels(), codes.h.config().num_classes()),
            ));
        }
        Ok(())
    }

    pub fn insert(&mut self, id: u64, codes: LandmarkCodes) -> Result<()> {
        self.check_codes(&codes)?;
        if self.entries.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let g_norm = norm(codes.g.vector().values());
        let h_norm = norm(codes.h.vector().values());
        self.entries.insert(id, Stored { codes, g_norm, h_norm });
        Ok(())
    }

    pub fn remove(&mut self, id: u64) -> Result<LandmarkCodes> {
        self.entries.remove(&id).map(|s| s.codes).ok_or(Error::UnknownId(id))
    }

    /// Fused score of `q` against every landmark, sorted best first.
    pub fn rank_all(&self, q: &LandmarkCodes, cfg: &FusionConfig) -> Result<Vec<Ranked>> {
        if self.entries.is_empty() {
            return Err(Error::EmptyIndex);
        }
        self.check_codes(q)?;
        let qg = q.g.vector().values();
        let qh = q.h.vector().values();
        let (qg_norm, qh_norm) = (norm(qg), norm(qh));
        let alpha = cfg.alpha();
        let mut ranked: Vec<Ranked> = self
            .entries
            .iter()
            .map(|(&id, s)| {
                let visual = cosine_with_norms(qg, qg_norm, s.codes.g.vector().values(), s.g_norm);
                let semantic = cosine_with_norms(qh, qh_norm, s.codes.h.vector().values(), s.h_norm);
                Ranked {
                    id,
                    score: alpha * visual + (1.0 - alpha) * semantic,
                }
            })
            .collect();
        ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.id.cmp(&b.id)));
        Ok(ranked)
    }

    /// Top `min(k, N)` landmarks by fused similarity.
    pub fn query(&self, q: &LandmarkCodes, k: usize, cfg: &FusionConfig) -> Result<Vec<Ranked>> {
        if k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        let mut ranked = self.rank_all(q, cfg)?;
        ranked.truncate(k);
        Ok(ranked)
    }

    /// 1-based rank of `true_id` in the full ranking of `q`.
    pub fn rank_of(&self, q: &LandmarkCodes, true_id: u64, cfg: &FusionConfig) -> Result<usize> {
        if !self.contains(true_id) {
            return Err(Error::UnknownId(true_id));
        }
        let ranked = self.rank_all(q, cfg)?;
        Ok(ranked.iter().position(|r| r.id == true_id).unwrap() + 1)
    }
}

/// Cutoff used for R@1%: `max(1, ceil(0.01 * N))`.
pub fn top_percent_cutoff(index_size: usize) -> usize {
    index_size.div_ceil(100).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecallReport {
    pub num_queries: usize,
    pub index_size: usize,
    /// Cutoff behind `r_at_1pct`.
    pub top_percent_cutoff: usize,
    /// Recall at each requested cutoff (plus 1, 5, 10 and the 1% cutoff).
    pub r_at: BTreeMap<usize, f64>,
    /// `curve[k - 1]` = R@k for `k = 1..=N`.
    pub curve: Vec<f64>,
}

impl RecallReport {
    pub const STANDARD_CUTOFFS: [usize; 3] = [1, 5, 10];

    /// R@k; cutoffs beyond the index size saturate at R@N.
    pub fn recall_at(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.curve[k.min(self.curve.len()) - 1]
    }

    pub fn r_at_1pct(&self) -> f64 {
        self.recall_at(self.top_percent_cutoff)
    }

    /// Build from the 1-based rank of every query's true landmark.
    pub fn from_ranks(ranks: &[usize], index_size: usize, extra_cutoffs: &[usize]) -> Self {
        let mut hits = vec![0usize; index_size + 1];
        for &r in ranks {
            hits[r] += 1;
        }
        let n = ranks.len().max(1) as f64;
        let mut curve = Vec::with_capacity(index_size);
        let mut cumulative = 0usize;
        for &h in &hits[1..] {
            cumulative += h;
            curve.push(cumulative as f64 / n);
        }
        let top = top_percent_cutoff(index_size);
        let mut report = Self {
            num_queries: ranks.len(),
            index_size,
            top_percent_cutoff: top,
            r_at: BTreeMap::new(),
            curve,
        };
        for &k in Self::STANDARD_CUTOFFS.iter().chain([top].iter()).chain(extra_cutoffs) {
            if k > 0 {
                report.r_at.insert(k, report.recall_at(k));
            }
        }
        report
    }
}

/// Recall of `queries` (codes plus true landmark id) against `index`.
pub fn eval_recall(
    index: &LandmarkIndex,
    queries: &[(LandmarkCodes, u64)],
    cfg: &FusionConfig,
    extra_cutoffs: &[usize],
) -> Result<RecallReport> {
    if index.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let ranks = queries
        .iter()
        .map(|(codes, id)| index.rank_of(codes, *id, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(RecallReport::from_ranks(&ranks, index.len(), extra_cutoffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::FeatureVector;

    fn bow(v: &[f32]) -> BowCode {
        BowCode::new(FeatureVector::new(v.to_vec()).unwrap()).unwrap()
    }

    fn spm(v: &[f32]) -> SpmCode {
        SpmCode::new(FeatureVector::new(v.to_vec()).unwrap(), SpmConfig::new(0, v.len()).unwrap()).unwrap()
    }

    fn codes(g: &[f32], h: &[f32]) -> LandmarkCodes {
        LandmarkCodes::new(bow(g), spm(h))
    }

    #[test]
    fn identical_codes_score_one() {
        let c = codes(&[0.6, 0.8, 0.0], &[1.0, 2.0, 3.0]);
        for alpha in [0.0, 0.3, 1.0] {
            let s = fused_similarity(&c, &c, &FusionConfig::new(alpha).unwrap()).unwrap();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_visual_identical_semantic() {
        let q = codes(&[1.0, 0.0], &[2.0, 1.0]);
        let l = codes(&[0.0, 1.0], &[2.0, 1.0]);
        let s = fused_similarity(&q, &l, &FusionConfig::default()).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn alpha_endpoints_collapse() {
        let q = codes(&[0.6, 0.8], &[1.0, 5.0]);
        let l = codes(&[0.8, 0.6], &[3.0, 1.0]);
        let g = cosine(q.g.vector().values(), l.g.vector().values()).unwrap();
        let h = cosine(q.h.vector().values(), l.h.vector().values()).unwrap();
        assert_eq!(fused_similarity(&q, &l, &FusionConfig::new(1.0).unwrap()).unwrap(), g);
        assert_eq!(fused_similarity(&q, &l, &FusionConfig::new(0.0).unwrap()).unwrap(), h);
    }

    #[test]
    fn zero_vector_rule() {
        assert_eq!(cosine(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert!(cosine(&[0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn alpha_is_validated() {
        assert!(FusionConfig::new(-0.1).is_err());
        assert!(FusionConfig::new(1.1).is_err());
        assert!(FusionConfig::new(f64::NAN).is_err());
    }

    fn small_index() -> LandmarkIndex {
        let spm_cfg = SpmConfig::new(0, 3).unwrap();
        let mut index = LandmarkIndex::new(3, spm_cfg);
        index.insert(7, codes(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0])).unwrap();
        index.insert(3, codes(&[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0])).unwrap();
        index.insert(5, codes(&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0])).unwrap();
        index
    }

    #[test]
    fn exact_match_ranks_first_and_ties_by_id() {
        let index = small_index();
        let q = codes(&[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0]);
        let ranked = index.query(&q, 10, &FusionConfig::default()).unwrap();
        assert_eq!(ranked.len(), 3);
        assert_eq!(ranked[0].id, 3);
        assert!((ranked[0].score - 1.0).abs() < 1e-12);
        // remaining two tie at 0 and come in id order
        assert_eq!((ranked[1].id, ranked[2].id), (5, 7));
        assert_eq!(index.query(&q, 1, &FusionConfig::default()).unwrap().len(), 1);
    }

    #[test]
    fn index_validation() {
        let mut index = small_index();
        assert!(matches!(
            index.insert(7, codes(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0])),
            Err(Error::DuplicateId(7))
        ));
        assert!(index.insert(9, codes(&[1.0, 0.0], &[1.0, 0.0, 0.0])).is_err());
        assert!(index.insert(9, codes(&[1.0, 0.0, 0.0], &[1.0, 0.0])).is_err());
        assert!(index.remove(3).is_ok());
        assert!(matches!(index.remove(3), Err(Error::UnknownId(3))));
        let empty = LandmarkIndex::new(3, SpmConfig::new(0, 3).unwrap());
        let q = codes(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]);
        assert!(matches!(empty.query(&q, 1, &FusionConfig::default()), Err(Error::EmptyIndex)));
    }

    #[test]
    fn perfect_retrieval_recall() {
        let index = small_index();
        let queries: Vec<_> = index.entries().map(|(id, c)| (c.clone(), id)).collect();
        let report = eval_recall(&index, &queries, &FusionConfig::default(), &[]).unwrap();
        assert!(report.curve.iter().all(|&r| r == 1.0));
        assert_eq!(report.r_at[&1], 1.0);
        let unknown = vec![(queries[0].0.clone(), 99)];
        assert!(matches!(
            eval_recall(&index, &unknown, &FusionConfig::default(), &[]),
            Err(Error::UnknownId(99))
        ));
    }

    #[test]
    fn rank_threshold_semantics() {
        let report = RecallReport::from_ranks(&[7], 20, &[]);
        assert_eq!(report.recall_at(1), 0.0);
        assert_eq!(report.recall_at(5), 0.0);
        assert_eq!(report.recall_at(10), 1.0);
        assert_eq!(report.r_at[&10], 1.0);
    }

    #[test]
    fn one_percent_cutoff() {
        assert_eq!(top_percent_cutoff(2691), 27);
        assert_eq!(top_percent_cutoff(50), 1);
        assert_eq!(top_percent_cutoff(100), 1);
        assert_eq!(top_percent_cutoff(101), 2);
        assert_eq!(top_percent_cutoff(1), 1);
    }
}
