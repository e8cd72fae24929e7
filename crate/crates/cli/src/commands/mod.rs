use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::Context;
use clap::Subcommand;
use plltm::corpus::{load_corpus, Corpus};
use plltm::model::persist::load_model;
use plltm::model::TrainedModel;
use plltm::Execution;

use crate::error::{usage, CliResult};

mod eval;
mod ingest;
mod intrude;
mod synth;
mod topics;
mod train;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build vocabularies from a raw corpus and write the encoded form.
    Ingest(ingest::IngestArgs),
    /// Generate a synthetic corpus together with its ground truth.
    Synth(synth::SynthArgs),
    /// Train a model with collapsed Gibbs sampling.
    Train(train::TrainArgs),
    /// Held-out perplexity of a trained model on a test corpus.
    Eval(eval::EvalArgs),
    /// Most probable terms of every topic.
    Topics(topics::TopicsArgs),
    /// Word-intrusion tasks and their answer key.
    Intrude(intrude::IntrudeArgs),
}

pub fn run(command: Command, exec: Execution) -> CliResult {
    match command {
        Command::Ingest(args) => ingest::run(args),
        Command::Synth(args) => synth::run(args),
        Command::Train(args) => train::run(args, exec),
        Command::Eval(args) => eval::run(args, exec),
        Command::Topics(args) => topics::run(args),
        Command::Intrude(args) => intrude::run(args),
    }
}

fn read_corpus(path: &Path) -> anyhow::Result<Corpus> {
    load_corpus(path).with_context(|| format!("loading corpus {}", path.display()))
}

fn read_model(path: &Path) -> anyhow::Result<TrainedModel> {
    load_model(path).with_context(|| format!("loading model {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// Expands a list given once for all languages or once per language.
fn per_language<T: Copy>(values: &[T], languages: usize, flag: &str) -> CliResult<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0]; languages]),
        n if n == languages => Ok(values.to_vec()),
        n => usage(format!("--{flag} takes 1 or {languages} values, got {n}")),
    }
}

/// Checks that the corpus vocabularies line up with the model's languages.
fn check_vocabularies(model: &TrainedModel, corpus: &Corpus, what: &str) -> anyhow::Result<()> {
    for (m, &l) in model.source_languages.iter().enumerate() {
        let vocab = corpus.vocabularies.get(l).with_context(|| {
            format!(
                "model was trained on corpus language {l}, the {what} corpus has {} languages",
                corpus.num_languages()
            )
        })?;
        let expected = model.phi[m].cols();
        if vocab.len() != expected {
            anyhow::bail!(
                "{what} corpus language {l} has {} terms, the model expects {expected}",
                vocab.len()
            );
        }
    }
    Ok(())
}

/// Model language for a corpus language, as a usage error when absent.
fn model_language(model: &TrainedModel, language: usize) -> CliResult<usize> {
    match model.model_language(language) {
        Some(m) => Ok(m),
        None => usage(format!(
            "language {language} was not modeled (model languages {:?})",
            model.source_languages
        )),
    }
}
