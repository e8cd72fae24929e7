use rand::Rng;

use super::Document;
use crate::error::{Error, Result};

/// A test document divided into the part the model conditions on
/// (`observed`) and the part it is scored on (`target`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeldOutSplit {
    pub observed: Document,
    pub target: Document,
    pub target_language: usize,
}

impl HeldOutSplit {
    /// Keeps only the listed languages in both halves. The target language
    /// must be among them.
    pub fn project(&self, languages: &[usize]) -> Option<HeldOutSplit> {
        let target_language = languages.iter().position(|&l| l == self.target_language)?;
        Some(HeldOutSplit {
            observed: self.observed.project(languages),
            target: self.target.project(languages),
            target_language,
        })
    }

    pub fn target_tokens(&self) -> &[u32] {
        &self.target.tokens[self.target_language]
    }
}

/// Sends a uniformly random `ceil(fraction * N)` of the target-language
/// token positions to the observed half, the rest to the target half.
/// Every other language goes wholly to the observed half. The observed
/// share is capped at `N - 1` so the target half is never empty.
pub fn split_held_out<R: Rng + ?Sized>(
    doc: &Document,
    target_language: usize,
    fraction: f64,
    rng: &mut R,
) -> Result<HeldOutSplit> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "held-out fraction must lie strictly between 0 and 1, got {fraction}"
        )));
    }
    let n = doc.len_in(target_language);
    if n < 2 {
        return Err(Error::TooFewTokens {
            doc_id: doc.doc_id.clone(),
            language: target_language,
            tokens: n,
        });
    }
    // 1e-9 absorbs representation error such as 0.7 * 10 = 7.000000000000001
    let observed_count = ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n - 1);
    let mut chosen = vec![false; n];
    for pos in rand::seq::index::sample(rng, n, observed_count) {
        chosen[pos] = true;
    }

    let block = &doc.tokens[target_language];
    let (mut kept, mut held) = (Vec::with_capacity(observed_count), Vec::with_capacity(n - observed_count));
    for (pos, &tok) in block.iter().enumerate() {
        if chosen[pos] {
            kept.push(tok);
        } else {
            held.push(tok);
        }
    }

    let languages = doc.num_languages();
    let mut observed_tokens = doc.tokens.clone();
    observed_tokens[target_language] = kept;
    let mut target_tokens = vec![Vec::new(); languages];
    target_tokens[target_language] = held;

    Ok(HeldOutSplit {
        observed: Document {
            doc_id: doc.doc_id.clone(),
            tokens: observed_tokens,
            labels: doc.labels.clone(),
        },
        target: Document {
            doc_id: doc.doc_id.clone(),
            tokens: target_tokens,
            labels: doc.labels.clone(),
        },
        target_language,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    #[test]
    fn half_split_partitions_positions() {
        let doc = Document::new("d", vec![vec![10, 11, 12, 13]], vec![]);
        let s = split_held_out(&doc, 0, 0.5, &mut seeded(3)).unwrap();
        assert_eq!(s.observed.tokens[0].len(), 2);
        assert_eq!(s.target.tokens[0].len(), 2);
        let mut all: Vec<u32> = s.observed.tokens[0].iter().chain(&s.target.tokens[0]).copied().collect();
        all.sort();
        assert_eq!(all, vec![10, 11, 12, 13]);
    }

    #[test]
    fn other_languages_stay_observed() {
        let doc = Document::new("d", vec![(0..10).collect(), vec![0, 1, 2, 3]], vec![4]);
        let s = split_held_out(&doc, 1, 0.5, &mut seeded(9)).unwrap();
        assert_eq!(s.observed.tokens[0].len(), 10);
        assert_eq!(s.observed.tokens[1].len(), 2);
        assert!(s.target.tokens[0].is_empty());
        assert_eq!(s.target.tokens[1].len(), 2);
        assert_eq!(s.target.labels, vec![4]);
        assert_eq!(s.observed.labels, vec![4]);
    }

    #[test]
    fn same_seed_same_split() {
        let doc = Document::new("d", vec![(0..40).collect()], vec![]);
        let a = split_held_out(&doc, 0, 0.5, &mut seeded(42)).unwrap();
        let b = split_held_out(&doc, 0, 0.5, &mut seeded(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_short_documents_and_bad_fractions() {
        let doc = Document::new("short", vec![vec![1]], vec![]);
        assert!(matches!(
            split_held_out(&doc, 0, 0.5, &mut seeded(0)),
            Err(Error::TooFewTokens { tokens: 1, .. })
        ));
        let doc = Document::new("d", vec![vec![1, 2]], vec![]);
        for f in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(split_held_out(&doc, 0, f, &mut seeded(0)).is_err());
        }
    }

    #[test]
    fn target_half_never_empty() {
        let doc = Document::new("d", vec![vec![1, 2]], vec![]);
        let s = split_held_out(&doc, 0, 0.99, &mut seeded(0)).unwrap();
        assert_eq!(s.target.tokens[0].len(), 1);
    }

    proptest! {
        #[test]
        fn split_is_a_multiset_partition(
            toks in prop::collection::vec(0u32..6, 2..60),
            fraction in 0.01f64..0.99,
            seed in any::<u64>(),
        ) {
            let doc = Document::new("d", vec![vec![7], toks.clone()], vec![]);
            let s = split_held_out(&doc, 1, fraction, &mut seeded(seed)).unwrap();
            let mut joined: Vec<u32> = s.observed.tokens[1].iter().chain(&s.target.tokens[1]).copied().collect();
            let mut orig = toks.clone();
            joined.sort();
            orig.sort();
            prop_assert_eq!(joined, orig);
            let expect = ((fraction * toks.len() as f64 - 1e-9).ceil() as usize).clamp(1, toks.len() - 1);
            prop_assert_eq!(s.observed.tokens[1].len(), expect);
            prop_assert_eq!(&s.observed.tokens[0], &vec![7]);
        }
    }
}
