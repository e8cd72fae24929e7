use rand::Rng;

use super::{LabelMask, Matrix, ModelConfig, TopicId};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Topic assignments indexed `[document][language][position]`.
pub type Assignments = Vec<Vec<Vec<TopicId>>>;

/// Sampler state: assignments plus the count aggregates the collapsed
/// conditional reads. Counts are kept in sync with `z` incrementally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelState {
    num_topics: usize,
    vocab_sizes: Vec<usize>,
    z: Assignments,
    /// `D x K`, row-major; summed over languages.
    doc_topic: Vec<u32>,
    /// Per language, `K x V^l` row-major.
    topic_term: Vec<Vec<u32>>,
    /// Per language, length `K`.
    topic_total: Vec<Vec<u32>>,
    doc_total: Vec<u32>,
}

impl ModelState {
    fn empty(corpus: &Corpus, num_topics: usize) -> Self {
        let vocab_sizes = corpus.vocab_sizes();
        Self {
            num_topics,
            topic_term: vocab_sizes.iter().map(|v| vec![0; num_topics * v]).collect(),
            topic_total: vec![vec![0; num_topics]; vocab_sizes.len()],
            vocab_sizes,
            z: Vec::with_capacity(corpus.num_documents()),
            doc_topic: vec![0; corpus.num_documents() * num_topics],
            doc_total: vec![0; corpus.num_documents()],
        }
    }

    /// Tallies counts from scratch for the given assignments.
    pub fn from_assignments(corpus: &Corpus, z: Assignments, num_topics: usize) -> Result<Self> {
        let mut state = Self::empty(corpus, num_topics);
        if z.len() != corpus.num_documents() {
            return Err(Error::Config(format!(
                "assignments cover {} documents, corpus has {}",
                z.len(),
                corpus.num_documents()
            )));
        }
        for (d, (doc, zd)) in corpus.documents.iter().zip(&z).enumerate() {
            if zd.len() != corpus.num_languages()
                || (0..corpus.num_languages()).any(|l| zd[l].len() != doc.len_in(l))
            {
                return Err(Error::Config(format!(
                    "assignments for document `{}` do not match its token counts",
                    doc.doc_id
                )));
            }
            for (l, (tokens, zl)) in doc.tokens.iter().zip(zd).enumerate() {
                for (&t, &k) in tokens.iter().zip(zl) {
                    if k as usize >= num_topics {
                        return Err(Error::Config(format!(
                            "assignment {k} in document `{}` exceeds topic count {num_topics}",
                            doc.doc_id
                        )));
                    }
                    state.add(d, l, t, k);
                }
            }
        }
        state.z = z;
        Ok(state)
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn num_documents(&self) -> usize {
        self.doc_total.len()
    }

    pub fn vocab_sizes(&self) -> &[usize] {
        &self.vocab_sizes
    }

    pub fn assignments(&self) -> &Assignments {
        &self.z
    }

    pub fn into_assignments(self) -> Assignments {
        self.z
    }

    pub fn doc_topic(&self, d: usize, k: usize) -> u32 {
        self.doc_topic[d * self.num_topics + k]
    }

    pub fn doc_topic_row(&self, d: usize) -> &[u32] {
        &self.doc_topic[d * self.num_topics..(d + 1) * self.num_topics]
    }

    pub fn topic_term(&self, l: usize, k: usize, t: usize) -> u32 {
        self.topic_term[l][k * self.vocab_sizes[l] + t]
    }

    pub fn topic_total(&self, l: usize, k: usize) -> u32 {
        self.topic_total[l][k]
    }

    pub fn doc_total(&self, d: usize) -> u32 {
        self.doc_total[d]
    }

    #[inline]
    pub(crate) fn add(&mut self, d: usize, l: usize, t: u32, k: TopicId) {
        let (k, t) = (k as usize, t as usize);
        self.doc_topic[d * self.num_topics + k] += 1;
        self.topic_term[l][k * self.vocab_sizes[l] + t] += 1;
        self.topic_total[l][k] += 1;
        self.doc_total[d] += 1;
    }

    #[inline]
    pub(crate) fn remove(&mut self, d: usize, l: usize, t: u32, k: TopicId) {
        let (k, t) = (k as usize, t as usize);
        self.doc_topic[d * self.num_topics + k] -= 1;
        self.topic_term[l][k * self.vocab_sizes[l] + t] -= 1;
        self.topic_total[l][k] -= 1;
        self.doc_total[d] -= 1;
    }

    #[inline]
    pub(crate) fn set_assignment(&mut self, d: usize, l: usize, i: usize, k: TopicId) {
        self.z[d][l][i] = k;
    }

    /// Compares every stored count with a fresh tally of `z`.
    pub fn check_consistency(&self, corpus: &Corpus) -> std::result::Result<(), String> {
        let fresh = Self::from_assignments(corpus, self.z.clone(), self.num_topics)
            .map_err(|e| e.to_string())?;
        if fresh.doc_topic != self.doc_topic {
            return Err("document-topic counts drifted".into());
        }
        if fresh.topic_term != self.topic_term {
            return Err("topic-term counts drifted".into());
        }
        if fresh.topic_total != self.topic_total {
            return Err("topic totals drifted".into());
        }
        if fresh.doc_total != self.doc_total {
            return Err("document totals drifted".into());
        }
        for (d, doc) in corpus.documents.iter().enumerate() {
            if self.doc_total[d] as usize != doc.total_tokens() {
                return Err(format!("document {d} total differs from its token count"));
            }
        }
        Ok(())
    }

    /// First assignment outside the mask, if any.
    pub fn find_mask_violation(&self, mask: &LabelMask) -> Option<(usize, usize, usize, TopicId)> {
        for (d, zd) in self.z.iter().enumerate() {
            for (l, zl) in zd.iter().enumerate() {
                for (i, &k) in zl.iter().enumerate() {
                    if !mask.contains(d, k) {
                        return Some((d, l, i, k));
                    }
                }
            }
        }
        None
    }

    /// Smoothed topic-term estimate `(n_kt + beta) / (n_k + V beta)` for
    /// every language.
    pub fn phi(&self, beta: &[f64]) -> Vec<Matrix> {
        self.vocab_sizes
            .iter()
            .enumerate()
            .map(|(l, &v)| {
                let mut m = Matrix::zeros(self.num_topics, v);
                let vb = v as f64 * beta[l];
                for k in 0..self.num_topics {
                    let denom = self.topic_total[l][k] as f64 + vb;
                    let counts = &self.topic_term[l][k * v..(k + 1) * v];
                    for (out, &n) in m.row_mut(k).iter_mut().zip(counts) {
                        *out = (n as f64 + beta[l]) / denom;
                    }
                }
                m
            })
            .collect()
    }
}

/// Draws every assignment uniformly from the document's permitted topics.
pub fn init_state<R: Rng + ?Sized>(
    corpus: &Corpus,
    mask: &LabelMask,
    config: &ModelConfig,
    rng: &mut R,
) -> Result<ModelState> {
    if mask.num_documents() != corpus.num_documents() {
        return Err(Error::Config(format!(
            "label mask covers {} documents, corpus has {}",
            mask.num_documents(),
            corpus.num_documents()
        )));
    }
    if config.num_languages != corpus.num_languages() {
        return Err(Error::Config(format!(
            "configuration has {} languages, corpus has {}",
            config.num_languages,
            corpus.num_languages()
        )));
    }
    let mut state = ModelState::empty(corpus, config.num_topics);
    for (d, doc) in corpus.documents.iter().enumerate() {
        let permitted = mask.permitted(d);
        if permitted.is_empty() {
            return Err(Error::EmptyLabelSet {
                doc_id: doc.doc_id.clone(),
            });
        }
        let mut zd = Vec::with_capacity(corpus.num_languages());
        for l in 0..corpus.num_languages() {
            let tokens = doc.tokens.get(l).map(Vec::as_slice).unwrap_or_default();
            let mut zl = Vec::with_capacity(tokens.len());
            for &t in tokens {
                let k = permitted[rng.random_range(0..permitted.len())];
                state.add(d, l, t, k);
                zl.push(k);
            }
            zd.push(zl);
        }
        state.z.push(zd);
    }
    Ok(state)
}

/// Posterior mean of a document's topic proportions under the restricted
/// prior: `(n_dk + alpha) / (n_d + alpha |permitted|)` on permitted
/// topics, zero elsewhere.
pub fn estimate_theta(state: &ModelState, mask: &LabelMask, config: &ModelConfig, d: usize) -> Vec<f64> {
    theta_from_counts(state.doc_topic_row(d), mask.permitted(d), config.alpha)
}

pub(crate) fn theta_from_counts(counts: &[u32], permitted: &[TopicId], alpha: f64) -> Vec<f64> {
    let total: u32 = permitted.iter().map(|&k| counts[k as usize]).sum();
    let denom = total as f64 + alpha * permitted.len() as f64;
    let mut theta = vec![0.0; counts.len()];
    for &k in permitted {
        theta[k as usize] = (counts[k as usize] as f64 + alpha) / denom;
    }
    theta
}
