use std::io::{self, Write};

use super::{fold_in_all, FoldInOptions};
use crate::corpus::{split_held_out, Corpus, Document, HeldOutSplit};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{ModelConfig, TrainedModel, Trainer};
use crate::rng::stream;

#[derive(Debug, Clone, PartialEq)]
pub struct PerplexityReport {
    /// `(sweep, perplexity)` pairs in sweep order.
    pub per_iteration: Vec<(usize, f64)>,
    pub final_perplexity: f64,
    /// Tokens scored across all target halves.
    pub token_count: usize,
}

/// Per-token perplexity of the target halves:
/// `exp(-sum log(sum_k theta_dk phi_kt) / N)` over every target token, with
/// `phi` taken from each split's target language.
///
/// Splits must be indexed by model language.
pub fn perplexity(model: &TrainedModel, splits: &[HeldOutSplit], thetas: &[Vec<f64>]) -> Result<PerplexityReport> {
    if splits.len() != thetas.len() {
        return Err(Error::Config(format!(
            "{} splits but {} topic vectors",
            splits.len(),
            thetas.len()
        )));
    }
    let mut log_lik = 0.0;
    let mut count = 0usize;
    for (split, theta) in splits.iter().zip(thetas) {
        let l = split.target_language;
        let phi = model.phi.get(l).ok_or_else(|| Error::LanguageOutOfRange {
            doc_id: split.target.doc_id.clone(),
            language: l,
            num_languages: model.num_languages(),
        })?;
        if theta.len() != phi.rows() {
            return Err(Error::Config(format!(
                "topic vector for `{}` has length {}, model has {} topics",
                split.target.doc_id,
                theta.len(),
                phi.rows()
            )));
        }
        for &t in split.target_tokens() {
            if t as usize >= phi.cols() {
                return Err(Error::TokenOutOfRange {
                    doc_id: split.target.doc_id.clone(),
                    language: l,
                    token: t,
                    vocab_size: phi.cols(),
                });
            }
            let p: f64 = theta
                .iter()
                .enumerate()
                .map(|(k, &th)| th * phi.get(k, t as usize))
                .sum();
            assert!(p > 0.0, "zero predictive probability");
            log_lik += p.ln();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Config("no held-out tokens to score".into()));
    }
    let value = (-log_lik / count as f64).exp();
    Ok(PerplexityReport {
        per_iteration: vec![(model.config.sweeps, value)],
        final_perplexity: value,
        token_count: count,
    })
}

#[derive(Debug, Clone)]
pub struct PreparedSplits {
    pub splits: Vec<HeldOutSplit>,
    /// Documents with fewer than two target-language tokens.
    pub skipped: Vec<String>,
}

/// Splits every usable test document; document `i` uses random stream
/// `stream(seed, i)`.
pub fn prepare_splits(test: &Corpus, target_language: usize, fraction: f64, seed: u64) -> Result<PreparedSplits> {
    if target_language >= test.num_languages() {
        return Err(Error::Config(format!(
            "target language {target_language} does not exist; the corpus has {} languages",
            test.num_languages()
        )));
    }
    let mut splits = Vec::new();
    let mut skipped = Vec::new();
    for (i, doc) in test.documents.iter().enumerate() {
        match split_held_out(doc, target_language, fraction, &mut stream(seed, i as u64)) {
            Ok(s) => splits.push(s),
            Err(Error::TooFewTokens { doc_id, .. }) => skipped.push(doc_id),
            Err(e) => return Err(e),
        }
    }
    if splits.is_empty() {
        return Err(Error::Config(format!(
            "no test document has two or more tokens in language {target_language}"
        )));
    }
    Ok(PreparedSplits { splits, skipped })
}

fn project_splits(model: &TrainedModel, splits: &[HeldOutSplit]) -> Result<Vec<HeldOutSplit>> {
    splits
        .iter()
        .map(|s| {
            s.project(&model.source_languages).ok_or_else(|| {
                Error::Config(format!(
                    "target language {} was not modeled (model languages {:?})",
                    s.target_language, model.source_languages
                ))
            })
        })
        .collect()
}

/// Folds in the observed halves and scores the target halves. Splits are
/// indexed by corpus language and projected onto the model's languages.
pub fn evaluate(
    model: &TrainedModel,
    splits: &[HeldOutSplit],
    opts: &FoldInOptions,
    seed: u64,
    exec: Execution,
) -> Result<PerplexityReport> {
    let projected = project_splits(model, splits)?;
    let observed: Vec<&Document> = projected.iter().map(|s| &s.observed).collect();
    let thetas = fold_in_all(model, &observed, opts, seed, exec)?;
    perplexity(model, &projected, &thetas)
}

#[derive(Debug, Clone, Copy)]
pub struct CurveOptions {
    pub eval_every: usize,
    pub fold: FoldInOptions,
    pub seed: u64,
    pub exec: Execution,
}

/// Trains on `train` and records held-out perplexity every `eval_every`
/// sweeps (and after the last sweep). Splits are indexed by the training
/// corpus's languages.
pub fn perplexity_curve(
    train: &Corpus,
    splits: &[HeldOutSplit],
    config: &ModelConfig,
    opts: &CurveOptions,
) -> Result<PerplexityReport> {
    if opts.eval_every == 0 {
        return Err(Error::Config("eval_every must be at least 1".into()));
    }
    let mut trainer = Trainer::new(train, config.clone())?;
    let mut per_iteration = Vec::new();
    let mut token_count = 0;
    for sweep in 1..=config.sweeps {
        trainer.sweep();
        if sweep % opts.eval_every == 0 || sweep == config.sweeps {
            let snapshot = trainer.snapshot();
            let report = evaluate(&snapshot, splits, &opts.fold, opts.seed, opts.exec)?;
            token_count = report.token_count;
            per_iteration.push((sweep, report.final_perplexity));
        }
    }
    let final_perplexity = per_iteration.last().map(|p| p.1).expect("at least one sweep");
    Ok(PerplexityReport {
        per_iteration,
        final_perplexity,
        token_count,
    })
}

pub fn write_perplexity_csv<W: Write>(report: &PerplexityReport, out: &mut W) -> io::Result<()> {
    writeln!(out, "sweep,perplexity")?;
    for (sweep, value) in &report.per_iteration {
        writeln!(out, "{sweep},{value}")?;
    }
    Ok(())
}
