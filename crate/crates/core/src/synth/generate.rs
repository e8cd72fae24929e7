use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::corpus::{Corpus, Document, TermId, Vocabulary};
use crate::error::{Error, Result};
use crate::model::{Assignments, LabelMask, Matrix, TopicId};

/// Parameters of a synthetic corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub num_topics: usize,
    pub vocab_sizes: Vec<usize>,
    pub num_docs: usize,
    /// Mean label-set size; sizes are `1 + Poisson(mean - 1)` capped at K.
    pub labels_per_doc_mean: f64,
    /// Per-language Poisson mean of document length (truncated at 1).
    pub doc_length_means: Vec<f64>,
    pub alpha: f64,
    pub beta: Vec<f64>,
    /// When false, documents carry no labels and every topic is permitted.
    pub use_labels: bool,
}

impl SynthSpec {
    pub fn num_languages(&self) -> usize {
        self.vocab_sizes.len()
    }

    fn validate(&self) -> Result<()> {
        let l = self.num_languages();
        let bad = |m: &str| Err(Error::Config(m.to_owned()));
        if self.num_topics == 0 || self.num_docs == 0 || l == 0 {
            return bad("topics, documents and languages must all be at least 1");
        }
        if self.vocab_sizes.contains(&0) {
            return bad("vocabulary sizes must be at least 1");
        }
        if self.doc_length_means.len() != l || self.beta.len() != l {
            return bad("need one document-length mean and one beta per language");
        }
        if self.doc_length_means.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return bad("document-length means must be positive");
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.alpha) || !self.beta.iter().all(|&b| positive(b)) {
            return bad("concentrations must be positive");
        }
        if self.use_labels && (self.labels_per_doc_mean.is_nan() || self.labels_per_doc_mean < 1.0) {
            return bad("mean label-set size must be at least 1");
        }
        Ok(())
    }
}

/// The parameters a synthetic corpus was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Per language, `K x V^l`.
    pub phi_true: Vec<Matrix>,
    /// `D x K`, zero outside each document's permitted topics.
    pub theta_true: Matrix,
    pub masks: LabelMask,
    pub assignments: Assignments,
}

/// Symmetric Dirichlet draw of dimension `dim`.
///
/// Gamma variates with shape below one are drawn as
/// `Gamma(a + 1) * U^(1/a)` in log space so that tiny concentrations
/// (such as 0.01) do not underflow to an all-zero vector.
pub fn sample_dirichlet<R: Rng + ?Sized>(concentration: f64, dim: usize, rng: &mut R) -> Vec<f64> {
    let boosted = Gamma::new(concentration + 1.0, 1.0).expect("positive shape");
    let logs: Vec<f64> = (0..dim)
        .map(|_| {
            let g: f64 = boosted.sample(rng);
            let u: f64 = rng.random::<f64>();
            // 1 - u lies in (0, 1]
            g.ln() + (1.0 - u).ln() / concentration
        })
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|&x| (x - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

fn draw_categorical<R: Rng + ?Sized>(cumulative: &[f64], rng: &mut R) -> usize {
    let total = *cumulative.last().expect("non-empty");
    let u = rng.random::<f64>() * total;
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn truncated_poisson<R: Rng + ?Sized>(dist: &Poisson<f64>, rng: &mut R) -> usize {
    loop {
        let n = dist.sample(rng) as usize;
        if n >= 1 {
            return n;
        }
    }
}

/// Samples a corpus from the generative process: per-topic, per-language
/// term distributions from `Dir(beta^l)`, per-document label sets and topic
/// proportions from `Dir(alpha mu_d)`, then a topic and a term for every
/// token.
pub fn generate_corpus<R: Rng + ?Sized>(spec: &SynthSpec, rng: &mut R) -> Result<(Corpus, GroundTruth)> {
    spec.validate()?;
    let k = spec.num_topics;
    let num_languages = spec.num_languages();

    let phi_true: Vec<Matrix> = spec
        .vocab_sizes
        .iter()
        .zip(&spec.beta)
        .map(|(&v, &b)| Matrix::from_rows((0..k).map(|_| sample_dirichlet(b, v, rng)).collect()))
        .collect();
    let phi_cdf: Vec<Vec<Vec<f64>>> = phi_true
        .iter()
        .map(|m| (0..k).map(|t| cumulative(m.row(t))).collect())
        .collect();
    let lengths: Vec<Poisson<f64>> = spec
        .doc_length_means
        .iter()
        .map(|&m| Poisson::new(m).expect("validated mean"))
        .collect();
    let extra_labels = if spec.labels_per_doc_mean > 1.0 {
        Some(Poisson::new(spec.labels_per_doc_mean - 1.0).expect("positive mean"))
    } else {
        None
    };

    let mut documents = Vec::with_capacity(spec.num_docs);
    let mut theta_true = Matrix::zeros(spec.num_docs, k);
    let mut permitted_sets = Vec::with_capacity(spec.num_docs);
    let mut assignments = Vec::with_capacity(spec.num_docs);
    let width = spec.num_docs.to_string().len();
    for d in 0..spec.num_docs {
        let (labels, permitted): (Vec<u32>, Vec<TopicId>) = if spec.use_labels {
            let extra = extra_labels.as_ref().map_or(0, |p| p.sample(rng) as usize);
            let size = (1 + extra).min(k);
            let mut chosen: Vec<u32> = rand::seq::index::sample(rng, k, size)
                .into_iter()
                .map(|i| i as u32)
                .collect();
            chosen.sort_unstable();
            (chosen.clone(), chosen)
        } else {
            (Vec::new(), (0..k as TopicId).collect())
        };

        let theta_restricted = sample_dirichlet(spec.alpha, permitted.len(), rng);
        let row = theta_true.row_mut(d);
        for (&topic, &p) in permitted.iter().zip(&theta_restricted) {
            row[topic as usize] = p;
        }
        let theta_cdf = cumulative(&theta_restricted);

        let mut tokens: Vec<Vec<TermId>> = Vec::with_capacity(num_languages);
        let mut zd = Vec::with_capacity(num_languages);
        for l in 0..num_languages {
            let n = truncated_poisson(&lengths[l], rng);
            let mut block = Vec::with_capacity(n);
            let mut zl = Vec::with_capacity(n);
            for _ in 0..n {
                let topic = permitted[draw_categorical(&theta_cdf, rng)];
                let term = draw_categorical(&phi_cdf[l][topic as usize], rng);
                block.push(term as TermId);
                zl.push(topic);
            }
            tokens.push(block);
            zd.push(zl);
        }
        documents.push(Document::new(format!("doc{d:0width$}"), tokens, labels));
        permitted_sets.push(permitted);
        assignments.push(zd);
    }

    let label_width = k.to_string().len();
    let vocabularies = spec
        .vocab_sizes
        .iter()
        .enumerate()
        .map(|(l, &v)| {
            let w = v.to_string().len();
            Vocabulary::new(l, (0..v).map(|t| format!("l{l}_w{t:0w$}")).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let label_names = (0..k).map(|i| format!("topic{i:0label_width$}")).collect();
    let corpus = Corpus::new(documents, vocabularies, label_names)?;
    Ok((
        corpus,
        GroundTruth {
            phi_true,
            theta_true,
            masks: LabelMask::from_sets(permitted_sets),
            assignments,
        },
    ))
}
