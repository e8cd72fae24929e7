use std::path::PathBuf;

use clap::Args;
use plltm::corpus::{save_corpus, Corpus};
use plltm::model::{LabelMask, Matrix};
use plltm::rng::seeded;
use plltm::synth::{generate_corpus, save_ground_truth, GroundTruth, SynthSpec};

use super::per_language;
use crate::error::{usage, CliResult};
use crate::manifest::{with_suffix, ManifestBuilder};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of topics (and of labels).
    #[arg(long)]
    k: usize,
    /// Vocabulary size per language; the count sets the number of languages.
    #[arg(long, value_delimiter = ',', default_value = "200,200")]
    vocab: Vec<usize>,
    /// Training documents.
    #[arg(long, default_value_t = 500)]
    docs: usize,
    /// Mean document length, once or per language.
    #[arg(long, value_delimiter = ',', default_value = "60")]
    doc_length: Vec<f64>,
    /// Mean label-set size.
    #[arg(long, default_value_t = 2.0)]
    labels_mean: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Topic-term concentration, once or per language.
    #[arg(long, value_delimiter = ',', default_value = "0.01")]
    beta: Vec<f64>,
    /// Draw every document over all topics and write no labels.
    #[arg(long)]
    unlabeled: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra documents from the same model written as a test corpus.
    #[arg(long, default_value_t = 0)]
    test_docs: usize,
    /// Test corpus path; defaults to `<out>.test`.
    #[arg(long)]
    test_out: Option<PathBuf>,
    /// Corpus path; the ground truth goes to `<out>.truth`.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: SynthArgs) -> CliResult {
    let languages = args.vocab.len();
    if args.k == 0 || args.docs == 0 || languages == 0 {
        return usage("--k, --docs and --vocab must be positive");
    }
    let spec = SynthSpec {
        num_topics: args.k,
        vocab_sizes: args.vocab.clone(),
        num_docs: args.docs + args.test_docs,
        labels_per_doc_mean: args.labels_mean,
        doc_length_means: per_language(&args.doc_length, languages, "doc-length")?,
        alpha: args.alpha,
        beta: per_language(&args.beta, languages, "beta")?,
        use_labels: !args.unlabeled,
    };
    let mut manifest = ManifestBuilder::new("synth", args.seed);
    let (corpus, truth) = generate_corpus(&spec, &mut seeded(args.seed))?;

    let (train, train_truth) = slice(&corpus, &truth, 0..args.docs);
    save_corpus(&train, &args.out)?;
    let truth_path = with_suffix(&args.out, "truth");
    save_ground_truth(&train_truth, &truth_path)?;
    manifest.output(&args.out).output(&truth_path);

    if args.test_docs > 0 {
        let test_path = args.test_out.clone().unwrap_or_else(|| with_suffix(&args.out, "test"));
        let (test, test_truth) = slice(&corpus, &truth, args.docs..spec.num_docs);
        save_corpus(&test, &test_path)?;
        let test_truth_path = with_suffix(&test_path, "truth");
        save_ground_truth(&test_truth, &test_truth_path)?;
        manifest.output(&test_path).output(&test_truth_path);
    }
    let tokens: Vec<String> = (0..languages).map(|l| train.token_count(l).to_string()).collect();
    println!(
        "{} training documents, {} test documents, tokens per language {}",
        train.num_documents(),
        args.test_docs,
        tokens.join(",")
    );
    manifest.write_next_to(&args.out)?;
    Ok(())
}

/// The documents in `range` with the matching rows of the ground truth.
fn slice(corpus: &Corpus, truth: &GroundTruth, range: std::ops::Range<usize>) -> (Corpus, GroundTruth) {
    let k = truth.theta_true.cols();
    let theta: Vec<f64> = range.clone().flat_map(|d| truth.theta_true.row(d).to_vec()).collect();
    let part = GroundTruth {
        phi_true: truth.phi_true.clone(),
        theta_true: Matrix::from_vec(range.len(), k, theta),
        masks: LabelMask::from_sets(truth.masks.sets()[range.clone()].to_vec()),
        assignments: truth.assignments[range.clone()].to_vec(),
    };
    (corpus.with_documents(corpus.documents[range].to_vec()), part)
}
