//! Spatial-pyramid semantics coding.
//!
//! Level `l` splits the label map into a `2^l x 2^l` grid and counts the pixels
//! of each class in every cell. Cell `(r, c)` covers rows
//! `[floor(r*H/2^l), floor((r+1)*H/2^l))` and the analogous columns, so sizes
//! differ by at most one pixel when the dimensions are not divisible.
//!
//! Code layout (part of the persisted format): levels in order `0..=L`; inside a
//! level, cells in row-major order; inside a cell, classes fastest. Level `l`
//! is scaled by [`spm_weight`]. Counts are raw, not frequencies.

use crate::error::{Error, Result};
use crate::types::{FeatureVector, SemanticMap};

pub const MAX_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpmConfig {
    levels: usize,
    num_classes: usize,
}

impl SpmConfig {
    pub fn new(levels: usize, num_classes: usize) -> Result<Self> {
        if levels > MAX_LEVELS {
            return Err(Error::invalid(
                "levels",
                format!("{levels} exceeds the maximum of {MAX_LEVELS}"),
            ));
        }
        if num_classes < 2 {
            return Err(Error::invalid("num_classes", "must be at least 2"));
        }
        Ok(Self { levels, num_classes })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// `K * (4^(L+1) - 1) / 3`.
    pub fn code_len(&self) -> usize {
        self.num_classes * ((1usize << (2 * (self.levels + 1))) - 1) / 3
    }

    /// Offset of level `l` inside the code.
    pub fn level_offset(&self, level: usize) -> usize {
        self.num_classes * ((1usize << (2 * level)) - 1) / 3
    }
}

/// Level weight: `2^-L` for level 0, `2^(l-L-1)` otherwise. Weights over
/// `0..=L` sum to one.
pub fn spm_weight(level: usize, levels: usize) -> Result<f64> {
    if level > levels {
        return Err(Error::LevelOutOfRange { level, levels });
    }
    let exp = if level == 0 {
        -(levels as i32)
    } else {
        level as i32 - levels as i32 - 1
    };
    Ok(2f64.powi(exp))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpmCode {
    vector: FeatureVector,
    config: SpmConfig,
}

impl SpmCode {
    /// Wraps an existing vector, checking the length formula and sign.
    pub fn new(vector: FeatureVector, config: SpmConfig) -> Result<Self> {
        if vector.len() != config.code_len() {
            return Err(Error::mismatch("SPM code length", config.code_len(), vector.len()));
        }
        if let Some(i) = vector.values().iter().position(|&v| v < 0.0) {
            return Err(Error::invalid(
                "SPM code",
                format!("entry {i} is negative ({})", vector.values()[i]),
            ));
        }
        Ok(Self { vector, config })
    }

    pub fn vector(&self) -> &FeatureVector {
        &self.vector
    }

    pub fn config(&self) -> SpmConfig {
        self.config
    }

    pub fn into_vector(self) -> FeatureVector {
        self.vector
    }
}

/// Cell index of every coordinate along one axis for a grid of `cells` cells.
fn axis_cells(len: usize, cells: usize) -> Vec<usize> {
    let mut map = vec![0usize; len];
    for cell in 0..cells {
        let start = cell * len / cells;
        let end = (cell + 1) * len / cells;
        map[start..end].fill(cell);
    }
    map
}

/// Unweighted per-cell class counts of one level, laid out like the code block.
pub fn level_histograms(map: &SemanticMap, level: usize) -> Vec<u32> {
    let cells = 1usize << level;
    let k = map.num_classes();
    let (h, w) = (map.height(), map.width());
    let col_cell = axis_cells(w, cells);
    let row_cell = axis_cells(h, cells);
    let mut hist = vec![0u32; cells * cells * k];
    for (y, row) in map.labels().chunks_exact(w).enumerate() {
        let row_base = row_cell[y] * cells;
        for (&label, &cc) in row.iter().zip(&col_cell) {
            hist[(row_base + cc) * k + label as usize] += 1;
        }
    }
    hist
}

pub fn encode_spm(map: &SemanticMap, config: &SpmConfig) -> Result<SpmCode> {
    if map.num_classes() != config.num_classes() {
        return Err(Error::mismatch("class count", config.num_classes(), map.num_classes()));
    }
    let mut values = Vec::with_capacity(config.code_len());
    for level in 0..=config.levels() {
        let weight = spm_weight(level, config.levels())? as f32;
        values.extend(level_histograms(map, level).into_iter().map(|n| n as f32 * weight));
    }
    debug_assert_eq!(values.len(), config.code_len());
    Ok(SpmCode {
        vector: FeatureVector::new(values)?,
        config: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weights_match_closed_form() {
        assert_eq!(spm_weight(0, 2).unwrap(), 0.25);
        assert_eq!(spm_weight(2, 2).unwrap(), 0.5);
        assert_eq!(spm_weight(1, 2).unwrap(), 0.25);
        assert_eq!(spm_weight(0, 0).unwrap(), 1.0);
        assert!(matches!(spm_weight(3, 2), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn weights_sum_to_one() {
        for levels in 0..=MAX_LEVELS {
            let s: f64 = (0..=levels).map(|l| spm_weight(l, levels).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-12, "L = {levels}: {s}");
        }
    }

    #[test]
    fn code_length() {
        assert_eq!(SpmConfig::new(2, 8).unwrap().code_len(), 168);
        assert_eq!(SpmConfig::new(0, 3).unwrap().code_len(), 3);
        assert!(SpmConfig::new(11, 8).is_err());
    }

    fn worked_map() -> SemanticMap {
        SemanticMap::new(2, 2, 2, vec![0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn whole_image_histogram_at_level_zero() {
        let code = encode_spm(&worked_map(), &SpmConfig::new(0, 2).unwrap()).unwrap();
        assert_eq!(code.vector().values(), &[3.0, 1.0]);
    }

    #[test]
    fn two_level_worked_example() {
        let code = encode_spm(&worked_map(), &SpmConfig::new(1, 2).unwrap()).unwrap();
        assert_eq!(
            code.vector().values(),
            &[1.5, 0.5, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.5]
        );
    }

    #[test]
    fn uniform_map_counts_cell_sizes() {
        let map = SemanticMap::filled(7, 5, 3, 2).unwrap();
        for level in 0..=3 {
            let hist = level_histograms(&map, level);
            let cells = 1usize << level;
            for r in 0..cells {
                for c in 0..cells {
                    let rows = (r + 1) * 7 / cells - r * 7 / cells;
                    let cols = (c + 1) * 5 / cells - c * 5 / cells;
                    let cell = &hist[(r * cells + c) * 3..(r * cells + c + 1) * 3];
                    assert_eq!(cell, &[0, 0, (rows * cols) as u32]);
                }
            }
        }
    }

    #[test]
    fn class_mismatch_is_rejected() {
        assert!(encode_spm(&worked_map(), &SpmConfig::new(1, 3).unwrap()).is_err());
    }

    #[test]
    fn new_checks_length_and_sign() {
        let cfg = SpmConfig::new(0, 2).unwrap();
        assert!(SpmCode::new(FeatureVector::new(vec![1.0]).unwrap(), cfg).is_err());
        assert!(SpmCode::new(FeatureVector::new(vec![1.0, -1.0]).unwrap(), cfg).is_err());
        assert!(SpmCode::new(FeatureVector::new(vec![1.0, 0.0]).unwrap(), cfg).is_ok());
    }

    fn arb_map() -> impl Strategy<Value = SemanticMap> {
        (1usize..20, 1usize..20, 2usize..6).prop_flat_map(|(h, w, k)| {
            proptest::collection::vec(0u8..k as u8, h * w)
                .prop_map(move |labels| SemanticMap::new(h, w, k, labels).unwrap())
        })
    }

    proptest! {
        #[test]
        fn counts_are_conserved(map in arb_map(), level in 0usize..5) {
            let total: u64 = level_histograms(&map, level).iter().map(|&n| n as u64).sum();
            prop_assert_eq!(total, (map.height() * map.width()) as u64);
        }

        #[test]
        fn class_permutation_permutes_slots(map in arb_map(), shift in 1usize..5) {
            let k = map.num_classes();
            let perm = |l: u8| ((l as usize + shift) % k) as u8;
            let relabelled = SemanticMap::new(
                map.height(), map.width(), k, map.labels().iter().map(|&l| perm(l)).collect(),
            ).unwrap();
            let a = level_histograms(&map, 2);
            let b = level_histograms(&relabelled, 2);
            for (ca, cb) in a.chunks_exact(k).zip(b.chunks_exact(k)) {
                for c in 0..k {
                    prop_assert_eq!(ca[c], cb[perm(c as u8) as usize]);
                }
            }
        }
    }
}
