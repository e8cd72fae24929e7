use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use plltm::corpus::HeldOutSplit;
use plltm::eval::{evaluate, perplexity_curve, prepare_splits, write_perplexity_csv, CurveOptions, FoldInOptions};
use plltm::Execution;

use super::{check_vocabularies, create, model_language, read_corpus, read_model};
use crate::error::{usage, CliError, CliResult};
use crate::manifest::ManifestBuilder;

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Test corpus encoded with the training vocabularies.
    #[arg(long)]
    test: PathBuf,
    /// Fraction of each target-language block that is observed.
    #[arg(long, default_value_t = 0.5)]
    holdout_frac: f64,
    /// Corpus language whose held-out half is scored.
    #[arg(long, default_value_t = 0)]
    target_language: usize,
    #[arg(long, default_value_t = 200)]
    fold_sweeps: usize,
    #[arg(long, default_value_t = 100)]
    fold_burn_in: usize,
    /// Let held-out documents use every topic even for labeled models.
    #[arg(long)]
    no_label_restrict: bool,
    /// Seeds the split; fold-in uses seed + 1.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV with columns `sweep,perplexity`.
    #[arg(long)]
    out: PathBuf,
    /// Retrain from scratch with the model's settings and score periodically.
    #[arg(long, requires = "train")]
    curve: bool,
    /// Training corpus for --curve.
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    eval_every: usize,
    /// Overrides the model's sweep count for --curve.
    #[arg(long)]
    sweeps: Option<usize>,
}

pub fn run(args: EvalArgs, exec: Execution) -> CliResult {
    if !(args.holdout_frac > 0.0 && args.holdout_frac < 1.0) {
        return usage(format!("--holdout-frac must lie strictly between 0 and 1, got {}", args.holdout_frac));
    }
    if args.fold_burn_in >= args.fold_sweeps {
        return usage("--fold-burn-in must be smaller than --fold-sweeps");
    }
    if args.eval_every == 0 {
        return usage("--eval-every must be at least 1");
    }
    let mut manifest = ManifestBuilder::new("eval", args.seed);
    manifest.input(&args.model).input(&args.test);
    let model = read_model(&args.model)?;
    let test = read_corpus(&args.test)?;
    check_vocabularies(&model, &test, "test")?;
    model_language(&model, args.target_language)?;

    let prepared = prepare_splits(&test, args.target_language, args.holdout_frac, args.seed)?;
    if !prepared.skipped.is_empty() {
        eprintln!(
            "skipped {} test documents with fewer than two tokens in language {}",
            prepared.skipped.len(),
            args.target_language
        );
    }
    let fold = FoldInOptions {
        sweeps: args.fold_sweeps,
        burn_in: args.fold_burn_in,
        restrict_to_labels: !args.no_label_restrict,
    };
    let fold_seed = args.seed.wrapping_add(1);

    let report = if args.curve {
        let train_path = args.train.as_ref().expect("clap enforces --train with --curve");
        manifest.input(train_path);
        let train = read_corpus(train_path)?;
        check_vocabularies(&model, &train, "training")?;
        let train = train.select_languages(&model.source_languages)?;
        let splits: Vec<HeldOutSplit> = prepared
            .splits
            .iter()
            .map(|s| s.project(&model.source_languages).expect("target language is modeled"))
            .collect();
        let mut config = model.config.clone();
        if let Some(sweeps) = args.sweeps {
            config.sweeps = sweeps;
        }
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        manifest.config(&config);
        let opts = CurveOptions {
            eval_every: args.eval_every,
            fold,
            seed: fold_seed,
            exec,
        };
        perplexity_curve(&train, &splits, &config, &opts)?
    } else {
        manifest.config(&model.config);
        evaluate(&model, &prepared.splits, &fold, fold_seed, exec)?
    };

    let mut out = create(&args.out)?;
    write_perplexity_csv(&report, &mut out)
        .and_then(|()| out.flush())
        .with_context(|| format!("writing {}", args.out.display()))?;
    manifest.output(&args.out);
    println!(
        "perplexity {:.6} over {} held-out tokens in {} documents",
        report.final_perplexity,
        report.token_count,
        prepared.splits.len()
    );
    manifest.write_next_to(&args.out)?;
    Ok(())
}
