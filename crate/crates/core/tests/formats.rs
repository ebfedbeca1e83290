use proptest::prelude::*;

use vpr_core::bow::{BinaryDescriptor, BowCode, Vocabulary};
use vpr_core::io;
use vpr_core::retrieval::{LandmarkCodes, LandmarkIndex};
use vpr_core::spm::{SpmCode, SpmConfig};
use vpr_core::{FeatureVector, ImageBuffer, ProbabilityMap, SemanticMap};

fn image() -> impl Strategy<Value = ImageBuffer> {
    (1usize..24, 1usize..24, prop_oneof![Just(1usize), Just(3usize)]).prop_flat_map(|(h, w, c)| {
        proptest::collection::vec(any::<u8>(), h * w * c).prop_map(move |s| ImageBuffer::new(h, w, c, s).unwrap())
    })
}

fn label_map() -> impl Strategy<Value = SemanticMap> {
    (1usize..24, 1usize..24, 2usize..=256).prop_flat_map(|(h, w, k)| {
        proptest::collection::vec(0..=(k - 1) as u8, h * w).prop_map(move |l| SemanticMap::new(h, w, k, l).unwrap())
    })
}

fn prob_map() -> impl Strategy<Value = ProbabilityMap> {
    (1usize..12, 1usize..12, 2usize..8).prop_flat_map(|(h, w, k)| {
        proptest::collection::vec(0.001f32..1.0, h * w * k).prop_map(move |raw| {
            let probs = raw
                .chunks(k)
                .flat_map(|p| {
                    let s: f32 = p.iter().sum();
                    p.iter().map(move |v| v / s).collect::<Vec<_>>()
                })
                .collect();
            ProbabilityMap::new(h, w, k, probs).unwrap()
        })
    })
}

fn codes(g_dim: usize, spm: SpmConfig) -> impl Strategy<Value = LandmarkCodes> {
    (
        proptest::collection::vec(0u8..4, g_dim),
        proptest::collection::vec(0.0f32..100.0, spm.code_len()),
    )
        .prop_map(move |(g, h)| {
            let n = g.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
            let g = g.iter().map(|&v| if n > 0.0 { (v as f64 / n) as f32 } else { 0.0 }).collect();
            LandmarkCodes::new(
                BowCode::new(FeatureVector::new(g).unwrap()).unwrap(),
                SpmCode::new(FeatureVector::new(h).unwrap(), spm).unwrap(),
            )
        })
}

fn index() -> impl Strategy<Value = LandmarkIndex> {
    (1usize..12, 0usize..3, 2usize..5).prop_flat_map(|(g_dim, levels, k)| {
        let spm = SpmConfig::new(levels, k).unwrap();
        proptest::collection::btree_map(any::<u64>(), codes(g_dim, spm), 1..8).prop_map(move |entries| {
            let mut index = LandmarkIndex::new(g_dim, spm);
            for (id, c) in entries {
                index.insert(id, c).unwrap();
            }
            index
        })
    })
}

fn bits(v: &[f32]) -> Vec<u32> {
    v.iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn images(img in image()) {
        let bytes = io::image_to_bytes(&img);
        let back = io::image_from_bytes(&bytes).unwrap();
        prop_assert_eq!(io::image_to_bytes(&back), bytes);
        prop_assert_eq!(back, img);
    }

    #[test]
    fn label_maps(map in label_map()) {
        let bytes = io::label_map_to_bytes(&map);
        let back = io::label_map_from_bytes(&bytes, map.num_classes()).unwrap();
        prop_assert_eq!(back, map);
    }

    #[test]
    fn prob_maps(map in prob_map()) {
        let bytes = io::prob_map_to_bytes(&map);
        let back = io::prob_map_from_bytes(&bytes).unwrap();
        prop_assert_eq!(bits(back.probs()), bits(map.probs()));
        prop_assert_eq!(io::prob_map_to_bytes(&back), bytes);
    }

    #[test]
    fn codes_keep_bits(values in proptest::collection::vec(proptest::num::f32::NORMAL | proptest::num::f32::ZERO | proptest::num::f32::SUBNORMAL, 1..200)) {
        let v = FeatureVector::new(values).unwrap();
        let back = io::code_from_bytes(&io::code_to_bytes(&v)).unwrap();
        prop_assert_eq!(bits(back.values()), bits(v.values()));
    }

    #[test]
    fn vocabularies(words in proptest::collection::btree_set(any::<[u64; 4]>(), 1..30), seed in any::<u64>(), with_idf in any::<bool>()) {
        let words: Vec<_> = words.into_iter().map(BinaryDescriptor).collect();
        let idf = with_idf.then(|| (0..words.len()).map(|i| i as f32 * 0.25).collect());
        let vocab = Vocabulary::new(words, idf, seed).unwrap();
        let back = io::vocab_from_bytes(&io::vocab_to_bytes(&vocab)).unwrap();
        prop_assert_eq!(back, vocab);
    }

    #[test]
    fn indices(index in index()) {
        let bytes = io::index_to_bytes(&index);
        let back = io::index_from_bytes(&bytes).unwrap();
        prop_assert_eq!(io::index_entries(&back), io::index_entries(&index));
        prop_assert_eq!(io::index_to_bytes(&back), bytes);
    }
}

#[test]
fn truncated_inputs_are_rejected() {
    let v = FeatureVector::new(vec![1.0, 2.0, 3.0]).unwrap();
    let bytes = io::code_to_bytes(&v);
    for cut in 0..bytes.len() {
        assert!(io::code_from_bytes(&bytes[..cut]).is_err(), "cut at {cut}");
    }
    let mut bad = bytes.clone();
    bad[0] ^= 0xff;
    assert!(io::code_from_bytes(&bad).is_err());
}
