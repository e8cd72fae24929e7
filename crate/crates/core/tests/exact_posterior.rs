use plltm::corpus::{Corpus, Document, Vocabulary};
use plltm::model::ModelConfig;
use plltm::synth::{exact_posterior, ENUMERATION_LIMIT};
use plltm::Error;
use proptest::prelude::*;

fn corpus(docs: Vec<(Vec<u32>, Vec<u32>)>, v: usize, k: usize) -> Corpus {
    let docs = docs
        .into_iter()
        .enumerate()
        .map(|(i, (tokens, labels))| Document::new(format!("d{i}"), vec![tokens], labels))
        .collect();
    Corpus::new(
        docs,
        vec![Vocabulary::new(0, (0..v).map(|t| format!("w{t}")).collect()).unwrap()],
        (0..k).map(|i| format!("t{i}")).collect(),
    )
    .unwrap()
}

/// One document `[0,0,1]`, V=2, K=2, alpha=0.1, beta=0.01, enumerated with
/// exact rational arithmetic; entries in order z = 000, 001, ..., 111.
const FROZEN: [f64; 8] = [
    0.0846774193548387,
    0.40725806451612906,
    0.004032258064516129,
    0.004032258064516129,
    0.004032258064516129,
    0.004032258064516129,
    0.40725806451612906,
    0.0846774193548387,
];

#[test]
fn matches_frozen_rational_table() {
    let c = corpus(vec![(vec![0, 0, 1], vec![])], 2, 2);
    let post = exact_posterior(&c, &ModelConfig::new(2, 1)).unwrap();
    assert_eq!(post.len(), 8);
    for (i, expect) in FROZEN.iter().enumerate() {
        let z = [(i >> 2) as u32 & 1, (i >> 1) as u32 & 1, i as u32 & 1];
        let p = post.probability(&z);
        assert!((p - expect).abs() < 1e-12, "z {z:?}: {p} vs {expect}");
    }
}

#[test]
fn labels_shrink_the_support() {
    let c = corpus(vec![(vec![0, 1], vec![0, 2]), (vec![1], vec![1])], 2, 3);
    let post = exact_posterior(&c, &ModelConfig::new(3, 1).with_labels(true)).unwrap();
    assert_eq!(post.len(), 4);
    for z in &post.assignments {
        assert!(z[0] != 1 && z[1] != 1 && z[2] == 1, "{z:?}");
    }
    let total: f64 = post.probabilities.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn refuses_oversized_enumerations() {
    let c = corpus(vec![(vec![0; 13], vec![])], 1, 3);
    match exact_posterior(&c, &ModelConfig::new(3, 1)) {
        Err(Error::EnumerationTooLarge { size, limit }) => {
            assert_eq!(size, 3u128.pow(13));
            assert_eq!(limit, ENUMERATION_LIMIT);
        }
        other => panic!("expected EnumerationTooLarge, got {other:?}"),
    }
}

proptest! {
    #[test]
    fn normalized_and_invariant_to_document_order(
        a in prop::collection::vec(0u32..3, 1..4),
        b in prop::collection::vec(0u32..3, 1..4),
        alpha in 0.05f64..2.0,
        beta in 0.01f64..1.0,
    ) {
        let config = ModelConfig::new(2, 1).with_alpha(alpha).with_beta(&[beta]);
        let ab = exact_posterior(&corpus(vec![(a.clone(), vec![]), (b.clone(), vec![])], 3, 2), &config).unwrap();
        let ba = exact_posterior(&corpus(vec![(b.clone(), vec![]), (a.clone(), vec![])], 3, 2), &config).unwrap();
        let total: f64 = ab.probabilities.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for (z, p) in ab.assignments.iter().zip(&ab.probabilities) {
            let (za, zb) = z.split_at(a.len());
            let swapped: Vec<u32> = zb.iter().chain(za).copied().collect();
            prop_assert!((ba.probability(&swapped) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_under_topic_relabeling(tokens in prop::collection::vec(0u32..3, 1..6)) {
        let post = exact_posterior(&corpus(vec![(tokens, vec![])], 3, 2), &ModelConfig::new(2, 1)).unwrap();
        for (z, p) in post.assignments.iter().zip(&post.probabilities) {
            let flipped: Vec<u32> = z.iter().map(|k| 1 - k).collect();
            prop_assert!((post.probability(&flipped) - p).abs() < 1e-12);
        }
    }
}
