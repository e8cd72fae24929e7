use rand::Rng;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::model::{document_topics, sample_index, theta_from_counts, TopicId, TrainedModel};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldInOptions {
    pub sweeps: usize,
    pub burn_in: usize,
    /// Restrict held-out documents to their labels when the model was
    /// trained with labels.
    pub restrict_to_labels: bool,
}

impl Default for FoldInOptions {
    fn default() -> Self {
        Self {
            sweeps: 200,
            burn_in: 100,
            restrict_to_labels: true,
        }
    }
}

/// Estimates the topic proportions of an unseen document by Gibbs sampling
/// its topic assignments with the trained topic-term distributions held
/// fixed. The returned vector averages the posterior-mean estimate over the
/// sweeps after burn-in.
///
/// `observed.tokens[l]` must be indexed by model language.
pub fn fold_in<R: Rng + ?Sized>(
    model: &TrainedModel,
    observed: &Document,
    opts: &FoldInOptions,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if opts.burn_in >= opts.sweeps {
        return Err(Error::Config(format!(
            "fold-in burn-in ({}) must be smaller than its sweeps ({})",
            opts.burn_in, opts.sweeps
        )));
    }
    if observed.is_empty() {
        return Err(Error::EmptyDocument {
            doc_id: observed.doc_id.clone(),
        });
    }
    if observed.num_languages() > model.num_languages() {
        return Err(Error::LanguageOutOfRange {
            doc_id: observed.doc_id.clone(),
            language: observed.num_languages() - 1,
            num_languages: model.num_languages(),
        });
    }
    for (l, block) in observed.tokens.iter().enumerate() {
        let v = model.phi[l].cols();
        if let Some(&token) = block.iter().find(|&&t| t as usize >= v) {
            return Err(Error::TokenOutOfRange {
                doc_id: observed.doc_id.clone(),
                language: l,
                token,
                vocab_size: v,
            });
        }
    }

    let config = &model.config;
    let permitted: Vec<TopicId> = if config.use_labels && opts.restrict_to_labels {
        document_topics(observed, config)?
    } else {
        (0..config.num_topics as TopicId).collect()
    };
    let alpha = config.alpha;

    let mut counts = vec![0u32; config.num_topics];
    let mut z: Vec<Vec<TopicId>> = observed
        .tokens
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|_| {
                    let k = permitted[rng.random_range(0..permitted.len())];
                    counts[k as usize] += 1;
                    k
                })
                .collect()
        })
        .collect();

    let mut theta_sum = vec![0.0; config.num_topics];
    let mut weights = Vec::with_capacity(permitted.len());
    for sweep in 1..=opts.sweeps {
        if permitted.len() > 1 {
            for (l, block) in observed.tokens.iter().enumerate() {
                let phi = &model.phi[l];
                for (i, &t) in block.iter().enumerate() {
                    let old = z[l][i];
                    counts[old as usize] -= 1;
                    weights.clear();
                    let mut total = 0.0;
                    for &k in &permitted {
                        let w = (counts[k as usize] as f64 + alpha) * phi.get(k as usize, t as usize);
                        weights.push(w);
                        total += w;
                    }
                    let new = permitted[sample_index(&weights, total, rng)];
                    counts[new as usize] += 1;
                    z[l][i] = new;
                }
            }
        }
        if sweep > opts.burn_in {
            for (s, x) in theta_sum.iter_mut().zip(theta_from_counts(&counts, &permitted, alpha)) {
                *s += x;
            }
        }
    }
    let retained = (opts.sweeps - opts.burn_in) as f64;
    Ok(theta_sum.into_iter().map(|s| s / retained).collect())
}

/// Folds in every document with its own random stream `stream(seed, i)`,
/// so the result does not depend on the execution mode.
pub fn fold_in_all(
    model: &TrainedModel,
    observed: &[&Document],
    opts: &FoldInOptions,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    exec::map_indexed(exec, observed, |i, doc| {
        fold_in(model, doc, opts, &mut stream(seed, i as u64))
    })
    .into_iter()
    .collect()
}
