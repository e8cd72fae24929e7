use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use plltm::corpus::{build_vocabulary, encode_corpus, read_raw_documents, save_corpus, RawDocument};
use plltm::rng::seeded;
use rand::seq::index;

use crate::error::{usage, CliResult};
use crate::manifest::{with_suffix, ManifestBuilder};

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Raw corpus: `doc_id<TAB>labels<TAB>lang: tokens<TAB>...`.
    #[arg(long)]
    input: PathBuf,
    /// Encoded corpus; vocabulary and label sidecars are written next to it.
    #[arg(long)]
    out: PathBuf,
    /// Language order, comma separated. Defaults to order of first appearance.
    #[arg(long, value_delimiter = ',')]
    languages: Option<Vec<String>>,
    /// Drop terms seen fewer times than this in the training documents.
    #[arg(long, default_value_t = 5)]
    min_count: u64,
    /// Whitespace-separated stopword list applied to every language.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Number of randomly chosen documents set aside as a test corpus.
    #[arg(long, default_value_t = 0)]
    holdout: usize,
    /// Test corpus path; defaults to `<out>.test`.
    #[arg(long)]
    test_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: IngestArgs) -> CliResult {
    if args.min_count == 0 {
        return usage("--min-count must be at least 1");
    }
    let mut manifest = ManifestBuilder::new("ingest", args.seed);
    manifest.input(&args.input);
    let raw = read_raw_documents(&args.input, args.languages.as_deref())
        .with_context(|| format!("reading {}", args.input.display()))?;
    let stopwords: HashSet<String> = match &args.stopwords {
        Some(path) => {
            manifest.input(path);
            fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?
                .split_whitespace()
                .map(str::to_owned)
                .collect()
        }
        None => HashSet::new(),
    };

    let n = raw.documents.len();
    if args.holdout >= n {
        return usage(format!("--holdout {} leaves no training documents out of {n}", args.holdout));
    }
    let mut held = vec![false; n];
    for i in index::sample(&mut seeded(args.seed), n, args.holdout) {
        held[i] = true;
    }
    let (mut train, mut test): (Vec<RawDocument>, Vec<RawDocument>) = (Vec::new(), Vec::new());
    for (doc, h) in raw.documents.into_iter().zip(held) {
        if h { test.push(doc) } else { train.push(doc) }
    }

    let label_names: Vec<String> = train
        .iter()
        .chain(&test)
        .flat_map(|d| d.labels.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vocabularies = (0..raw.languages.len())
        .map(|l| build_vocabulary(&train, l, args.min_count, &stopwords))
        .collect::<Result<Vec<_>, _>>()?;

    let encoded = encode_corpus(&train, &vocabularies, &label_names)?;
    save_corpus(&encoded.corpus, &args.out)?;
    manifest.output(&args.out);
    let sizes: Vec<String> = vocabularies.iter().map(|v| v.len().to_string()).collect();
    println!(
        "languages {} | vocabulary sizes {} | {} labels | {} training documents ({} dropped as empty)",
        raw.languages.join(","),
        sizes.join(","),
        label_names.len(),
        encoded.corpus.num_documents(),
        encoded.dropped.len()
    );

    if !test.is_empty() {
        let test_path = args.test_out.clone().unwrap_or_else(|| with_suffix(&args.out, "test"));
        let encoded = encode_corpus(&test, &vocabularies, &label_names)?;
        save_corpus(&encoded.corpus, &test_path)?;
        manifest.output(&test_path);
        println!(
            "{} test documents ({} dropped as empty)",
            encoded.corpus.num_documents(),
            encoded.dropped.len()
        );
    }
    manifest.write_next_to(&args.out)?;
    Ok(())
}
