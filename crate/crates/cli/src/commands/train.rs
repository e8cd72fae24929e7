use std::path::{Path, PathBuf};

use clap::Args;
use plltm::corpus::Corpus;
use plltm::model::persist::save_model;
use plltm::model::{
    train_chains, train_with_progress, EmptyLabelPolicy, ModelConfig, ModelVariant, TrainedModel, DEFAULT_ALPHA,
};
use plltm::Execution;

use super::{per_language, read_corpus};
use crate::error::{usage, CliError, CliResult};
use crate::manifest::{with_suffix, ManifestBuilder};

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// lda, llda, pltm or plltm.
    #[arg(long, default_value = "plltm")]
    model: ModelVariant,
    /// Corpus language for lda and llda; required when the corpus has several.
    #[arg(long)]
    language: Option<usize>,
    /// Number of topics. Labeled models default to the number of labels.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Topic-term concentration, once or per modeled language.
    #[arg(long, value_delimiter = ',', default_value = "0.01")]
    beta: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// all-topics or strict.
    #[arg(long, default_value = "all-topics")]
    empty_labels: EmptyLabelPolicy,
    /// Average phi over the sweeps after burn-in.
    #[arg(long)]
    average: bool,
    /// Independent chains with seeds seed, seed+1, ...; outputs get a
    /// `.chain<i>` suffix.
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Store the final topic assignments in the model file.
    #[arg(long)]
    save_assignments: bool,
    /// Report reassigned tokens on stderr every this many sweeps.
    #[arg(long)]
    progress_every: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: TrainArgs, exec: Execution) -> CliResult {
    let mut manifest = ManifestBuilder::new("train", args.seed);
    manifest.input(&args.corpus);
    let corpus = read_corpus(&args.corpus)?;
    let languages = modeled_languages(&args, &corpus)?;
    let corpus = corpus.select_languages(&languages)?;

    let num_topics = match (args.k, args.model.uses_labels()) {
        (Some(k), _) => k,
        (None, true) if corpus.num_labels() > 0 => corpus.num_labels(),
        (None, true) => return usage("the corpus has no labels; pass --k"),
        (None, false) => return usage(format!("--k is required for {}", args.model)),
    };
    if args.chains == 0 {
        return usage("--chains must be at least 1");
    }
    let config = ModelConfig {
        empty_labels: args.empty_labels,
        average_samples: args.average,
        ..ModelConfig::for_variant(args.model, num_topics, languages.len())
            .with_alpha(args.alpha)
            .with_beta(&per_language(&args.beta, languages.len(), "beta")?)
            .with_sweeps(args.sweeps, args.burn_in)
            .with_seed(args.seed)
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    manifest.config(&config);

    let models = if args.chains == 1 {
        let every = args.progress_every.unwrap_or(0);
        let model = train_with_progress(&corpus, &config, |p| {
            if every > 0 && p.sweep % every == 0 {
                eprintln!("sweep {}: {} tokens reassigned", p.sweep, p.reassigned);
            }
        })?;
        vec![model]
    } else {
        let configs: Vec<ModelConfig> = (0..args.chains as u64)
            .map(|i| config.clone().with_seed(args.seed.wrapping_add(i)))
            .collect();
        train_chains(&corpus, &configs, exec)?
    };

    for (i, mut model) in models.into_iter().enumerate() {
        model.source_languages = languages.clone();
        let path = if args.chains == 1 {
            args.out.clone()
        } else {
            with_suffix(&args.out, &format!("chain{i}"))
        };
        write_model(&model, &path, args.save_assignments)?;
        manifest.output(&path);
    }
    println!(
        "trained {} with K={} on languages {:?} for {} sweeps",
        args.model, num_topics, languages, args.sweeps
    );
    manifest.write_next_to(&args.out)?;
    Ok(())
}

fn modeled_languages(args: &TrainArgs, corpus: &Corpus) -> CliResult<Vec<usize>> {
    let available = corpus.num_languages();
    if args.model.is_polylingual() {
        if args.language.is_some() {
            return usage(format!("--language applies to lda and llda, not {}", args.model));
        }
        return Ok((0..available).collect());
    }
    match args.language {
        Some(l) if l < available => Ok(vec![l]),
        Some(l) => usage(format!("--language {l} does not exist; the corpus has {available} languages")),
        None if available == 1 => Ok(vec![0]),
        None => usage(format!(
            "{} is unilingual and the corpus has {available} languages; pass --language",
            args.model
        )),
    }
}

fn write_model(model: &TrainedModel, path: &Path, assignments: bool) -> anyhow::Result<()> {
    use anyhow::Context;
    save_model(model, path, assignments).with_context(|| format!("writing model {}", path.display()))
}
