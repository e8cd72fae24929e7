//! Collapsed Gibbs updates for the topic indicators.
//!
//! For a token of term `t` in language `l` of document `d`, the conditional
//! weight of topic `k` is
//!
//! ```text
//! (n_dk + alpha) * (n_kt^l + beta^l) / (n_k^l + V^l beta^l)
//! ```
//!
//! with the token itself excluded from every count, and zero for topics
//! outside the document's permitted set. The document-length denominator
//! does not depend on `k` and is left out.

use rand::Rng;

use super::{LabelMask, ModelConfig, ModelState, TopicId};
use crate::corpus::Corpus;

/// Normalized conditional over all `K` topics for a token currently
/// assigned to `current_k` (its counts are still included in `state`).
pub fn full_conditional(
    state: &ModelState,
    mask: &LabelMask,
    config: &ModelConfig,
    d: usize,
    l: usize,
    t: u32,
    current_k: TopicId,
) -> Vec<f64> {
    let beta = config.beta[l];
    let v_beta = state.vocab_sizes()[l] as f64 * beta;
    let mut probs = vec![0.0; config.num_topics];
    let mut total = 0.0;
    for &k in mask.permitted(d) {
        let own = u32::from(k == current_k);
        let ku = k as usize;
        let n_dk = (state.doc_topic(d, ku) - own) as f64;
        let n_kt = (state.topic_term(l, ku, t as usize) - own) as f64;
        let n_k = (state.topic_total(l, ku) - own) as f64;
        let w = (n_dk + config.alpha) * (n_kt + beta) / (n_k + v_beta);
        probs[ku] = w;
        total += w;
    }
    assert!(total > 0.0, "conditional weights vanished");
    for p in &mut probs {
        *p /= total;
    }
    probs
}

/// Draws an index from unnormalized `weights` with one uniform variate.
#[inline]
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Reusable scratch space for sweeps.
#[derive(Debug, Default, Clone)]
pub struct Sampler {
    weights: Vec<f64>,
    v_beta: Vec<f64>,
}

impl Sampler {
    pub fn new(config: &ModelConfig, vocab_sizes: &[usize]) -> Self {
        Self {
            weights: Vec::with_capacity(config.num_topics),
            v_beta: vocab_sizes
                .iter()
                .zip(&config.beta)
                .map(|(&v, &b)| v as f64 * b)
                .collect(),
        }
    }

    /// One pass over every token: documents, then languages, then
    /// positions, all ascending. `observe(d, l, i, old, new)` sees each
    /// resampled token. Returns how many tokens changed topic.
    pub fn sweep_observed<R, F>(
        &mut self,
        state: &mut ModelState,
        mask: &LabelMask,
        config: &ModelConfig,
        corpus: &Corpus,
        rng: &mut R,
        mut observe: F,
    ) -> usize
    where
        R: Rng + ?Sized,
        F: FnMut(usize, usize, usize, TopicId, TopicId),
    {
        let alpha = config.alpha;
        let mut changed = 0;
        for (d, doc) in corpus.documents.iter().enumerate() {
            let permitted = mask.permitted(d);
            if permitted.len() == 1 {
                // a single permitted topic leaves nothing to sample
                let k = permitted[0];
                for (l, tokens) in doc.tokens.iter().enumerate() {
                    for i in 0..tokens.len() {
                        observe(d, l, i, k, k);
                    }
                }
                continue;
            }
            for (l, tokens) in doc.tokens.iter().enumerate() {
                let beta = config.beta[l];
                let v_beta = self.v_beta[l];
                for (i, &t) in tokens.iter().enumerate() {
                    let old = state.assignments()[d][l][i];
                    state.remove(d, l, t, old);

                    self.weights.clear();
                    let mut total = 0.0;
                    for &k in permitted {
                        let ku = k as usize;
                        let w = (state.doc_topic(d, ku) as f64 + alpha)
                            * (state.topic_term(l, ku, t as usize) as f64 + beta)
                            / (state.topic_total(l, ku) as f64 + v_beta);
                        self.weights.push(w);
                        total += w;
                    }
                    let new = permitted[sample_index(&self.weights, total, rng)];

                    state.add(d, l, t, new);
                    state.set_assignment(d, l, i, new);
                    changed += usize::from(new != old);
                    observe(d, l, i, old, new);
                }
            }
        }
        changed
    }
}

/// One deterministic-order Gibbs sweep over every token of the corpus.
pub fn gibbs_sweep<R: Rng + ?Sized>(
    state: &mut ModelState,
    mask: &LabelMask,
    config: &ModelConfig,
    corpus: &Corpus,
    rng: &mut R,
) -> usize {
    Sampler::new(config, state.vocab_sizes()).sweep_observed(state, mask, config, corpus, rng, |_, _, _, _, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Vocabulary};
    use crate::model::{build_label_mask, init_state};
    use rand::Rng;
    use crate::rng::seeded;
    use proptest::prelude::*;

    fn corpus(docs: Vec<Document>, vocab: &[usize], labels: usize) -> Corpus {
        Corpus::new(
            docs,
            vocab
                .iter()
                .enumerate()
                .map(|(l, &v)| Vocabulary::new(l, (0..v).map(|i| format!("w{i}")).collect()).unwrap())
                .collect(),
            (0..labels).map(|i| format!("c{i}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn symmetric_counts_give_even_split() {
        // excluding token 0 leaves one term-1 token in each topic
        let c = corpus(vec![Document::new("d", vec![vec![0, 1, 1]], vec![])], &[2], 0);
        let cfg = ModelConfig::new(2, 1);
        let mask = LabelMask::full(1, 2);
        let s = ModelState::from_assignments(&c, vec![vec![vec![0, 0, 1]]], 2).unwrap();
        assert_eq!(full_conditional(&s, &mask, &cfg, 0, 0, 0, 0), vec![0.5, 0.5]);
    }

    #[test]
    fn restricted_topics_get_zero_mass() {
        let c = corpus(vec![Document::new("d", vec![vec![0, 1]], vec![1])], &[2], 2);
        let cfg = ModelConfig::new(2, 1).with_labels(true);
        let mask = build_label_mask(&c, &cfg).unwrap();
        let s = ModelState::from_assignments(&c, vec![vec![vec![1, 1]]], 2).unwrap();
        assert_eq!(full_conditional(&s, &mask, &cfg, 0, 0, 1, 1), vec![0.0, 1.0]);
    }

    #[test]
    fn hand_evaluated_tiny_conditional() {
        // tokens [0,0,1], z = (0,0,.), alpha 0.1, beta 0.01; exact values
        // from rational arithmetic: 21/122 and 101/122
        let c = corpus(vec![Document::new("d", vec![vec![0, 0, 1]], vec![])], &[2], 0);
        let cfg = ModelConfig::new(2, 1);
        let mask = LabelMask::full(1, 2);
        for current in [0, 1] {
            let s = ModelState::from_assignments(&c, vec![vec![vec![0, 0, current]]], 2).unwrap();
            let p = full_conditional(&s, &mask, &cfg, 0, 0, 1, current);
            assert!((p[0] - 21.0 / 122.0).abs() < 1e-14, "{p:?}");
            assert!((p[1] - 101.0 / 122.0).abs() < 1e-14, "{p:?}");
        }
    }

    #[test]
    fn singleton_labels_are_a_fixed_point() {
        let docs = (0..5)
            .map(|i| Document::new(format!("d{i}"), vec![vec![0, 1, 2, 1]], vec![i % 3]))
            .collect();
        let c = corpus(docs, &[3], 3);
        let cfg = ModelConfig::new(3, 1).with_labels(true);
        let mask = build_label_mask(&c, &cfg).unwrap();
        let mut rng = seeded(5);
        let mut s = init_state(&c, &mask, &cfg, &mut rng).unwrap();
        let before = s.clone();
        assert_eq!(gibbs_sweep(&mut s, &mask, &cfg, &c, &mut rng), 0);
        assert_eq!(s, before);
    }

    fn random_corpus(seed: u64, docs: usize) -> Corpus {
        let mut rng = seeded(seed);
        let documents = (0..docs)
            .map(|i| {
                let n0 = rng.random_range(0..12);
                let n1 = rng.random_range(0..6);
                Document::new(
                    format!("d{i}"),
                    vec![
                        (0..n0).map(|_| rng.random_range(0..7)).collect(),
                        (0..n1).map(|_| rng.random_range(0..4)).collect(),
                    ],
                    (0..rng.random_range(0..3)).map(|_| rng.random_range(0..4)).collect(),
                )
            })
            .collect();
        corpus(documents, &[7, 4], 4)
    }

    #[test]
    fn sweeps_are_deterministic() {
        let c = random_corpus(3, 30);
        let cfg = ModelConfig::new(4, 2).with_labels(true);
        let mask = build_label_mask(&c, &cfg).unwrap();
        let run = || {
            let mut rng = seeded(99);
            let mut s = init_state(&c, &mask, &cfg, &mut rng).unwrap();
            let mut trajectory = Vec::new();
            for _ in 0..10 {
                gibbs_sweep(&mut s, &mask, &cfg, &c, &mut rng);
                trajectory.push(s.assignments().clone());
            }
            trajectory
        };
        assert_eq!(run(), run());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn counts_and_labels_hold_after_sweeps(seed in any::<u64>(), labels in any::<bool>()) {
            let c = random_corpus(seed, 25);
            let cfg = ModelConfig::new(4, 2).with_labels(labels);
            let mask = build_label_mask(&c, &cfg).unwrap();
            let mut rng = seeded(seed ^ 0xabc);
            let mut s = init_state(&c, &mask, &cfg, &mut rng).unwrap();
            let mut sampler = Sampler::new(&cfg, s.vocab_sizes());
            for _ in 0..5 {
                let mut closed = true;
                sampler.sweep_observed(&mut s, &mask, &cfg, &c, &mut rng, |d, _, _, _, k| {
                    closed &= mask.contains(d, k);
                });
                prop_assert!(closed);
                prop_assert_eq!(s.check_consistency(&c), Ok(()));
            }
        }

        #[test]
        fn document_denominator_cancels(seed in any::<u64>()) {
            let c = random_corpus(seed, 10);
            let cfg = ModelConfig::new(4, 2).with_labels(true);
            let mask = build_label_mask(&c, &cfg).unwrap();
            let s = init_state(&c, &mask, &cfg, &mut seeded(seed)).unwrap();
            for (d, doc) in c.documents.iter().enumerate() {
                for (l, tokens) in doc.tokens.iter().enumerate() {
                    for (i, &t) in tokens.iter().enumerate() {
                        let cur = s.assignments()[d][l][i];
                        let p = full_conditional(&s, &mask, &cfg, d, l, t, cur);
                        // same weights, each divided by (n_d - 1 + K alpha)
                        let denom = (s.doc_total(d) - 1) as f64 + cfg.num_topics as f64 * cfg.alpha;
                        let v_beta = c.vocabularies[l].len() as f64 * cfg.beta[l];
                        let mut w = vec![0.0; cfg.num_topics];
                        for &k in mask.permitted(d) {
                            let own = u32::from(k == cur);
                            let ku = k as usize;
                            w[ku] = ((s.doc_topic(d, ku) - own) as f64 + cfg.alpha) / denom
                                * ((s.topic_term(l, ku, t as usize) - own) as f64 + cfg.beta[l])
                                / ((s.topic_total(l, ku) - own) as f64 + v_beta);
                        }
                        let z: f64 = w.iter().sum();
                        for (a, b) in p.iter().zip(&w) {
                            prop_assert!((a - b / z).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}
