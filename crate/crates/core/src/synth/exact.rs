//! Brute-force collapsed posterior over topic assignments.

use std::collections::HashMap;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::model::{build_label_mask, Assignments, ModelConfig, TopicId};

pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Every admissible assignment vector with its posterior probability.
/// Vectors list tokens in sweep order: documents, languages, positions.
#[derive(Debug, Clone)]
pub struct ExactPosterior {
    pub assignments: Vec<Vec<TopicId>>,
    pub probabilities: Vec<f64>,
}

impl ExactPosterior {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Zero for assignment vectors outside the support.
    pub fn probability(&self, z: &[TopicId]) -> f64 {
        self.assignments
            .iter()
            .position(|a| a == z)
            .map_or(0.0, |i| self.probabilities[i])
    }

    pub fn to_map(&self) -> HashMap<Vec<TopicId>, f64> {
        self.assignments.iter().cloned().zip(self.probabilities.iter().copied()).collect()
    }
}

pub fn flatten_assignments(z: &Assignments) -> Vec<TopicId> {
    z.iter().flatten().flatten().copied().collect()
}

/// `ln(x (x+1) ... (x+n-1)) = ln Gamma(x+n) - ln Gamma(x)`.
fn ln_rising(x: f64, n: u32) -> f64 {
    (0..n).map(|i| (x + i as f64).ln()).sum()
}

/// Enumerates all assignment vectors allowed by the label mask and scores
/// each by the collapsed joint: a Dirichlet-multinomial term per document
/// over its permitted topics times one per language and topic over terms.
pub fn exact_posterior(corpus: &Corpus, config: &ModelConfig) -> Result<ExactPosterior> {
    config.validate()?;
    let mask = build_label_mask(corpus, config)?;
    let k = config.num_topics;

    // token table in sweep order: (document, language, term)
    let mut tokens = Vec::new();
    for (d, doc) in corpus.documents.iter().enumerate() {
        for (l, block) in doc.tokens.iter().enumerate() {
            for &t in block {
                tokens.push((d, l, t as usize));
            }
        }
    }
    let mut size: u128 = 1;
    for &(d, _, _) in &tokens {
        size = size.saturating_mul(mask.permitted(d).len() as u128);
    }
    if size > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            size,
            limit: ENUMERATION_LIMIT,
        });
    }

    let vocab_sizes = corpus.vocab_sizes();
    let score = |digits: &[usize]| -> f64 {
        let mut doc_topic = vec![vec![0u32; k]; corpus.num_documents()];
        let mut topic_term: Vec<Vec<Vec<u32>>> = vocab_sizes.iter().map(|&v| vec![vec![0; v]; k]).collect();
        for (&(d, l, t), &digit) in tokens.iter().zip(digits) {
            let topic = mask.permitted(d)[digit] as usize;
            doc_topic[d][topic] += 1;
            topic_term[l][topic][t] += 1;
        }
        let mut log_p = 0.0;
        for (d, counts) in doc_topic.iter().enumerate() {
            let permitted = mask.permitted(d);
            let n: u32 = counts.iter().sum();
            for &topic in permitted {
                log_p += ln_rising(config.alpha, counts[topic as usize]);
            }
            log_p -= ln_rising(config.alpha * permitted.len() as f64, n);
        }
        for (l, per_topic) in topic_term.iter().enumerate() {
            let beta = config.beta[l];
            for counts in per_topic {
                let n: u32 = counts.iter().sum();
                for &c in counts {
                    log_p += ln_rising(beta, c);
                }
                log_p -= ln_rising(vocab_sizes[l] as f64 * beta, n);
            }
        }
        log_p
    };

    let mut assignments = Vec::with_capacity(size as usize);
    let mut log_scores = Vec::with_capacity(size as usize);
    let mut digits = vec![0usize; tokens.len()];
    loop {
        log_scores.push(score(&digits));
        assignments.push(
            tokens
                .iter()
                .zip(&digits)
                .map(|(&(d, _, _), &i)| mask.permitted(d)[i])
                .collect(),
        );
        // odometer increment, last token fastest
        let mut pos = tokens.len();
        loop {
            if pos == 0 {
                let max = log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = log_scores.iter().map(|&s| (s - max).exp()).collect();
                let total: f64 = weights.iter().sum();
                return Ok(ExactPosterior {
                    assignments,
                    probabilities: weights.into_iter().map(|w| w / total).collect(),
                });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < mask.permitted(tokens[pos].0).len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}
