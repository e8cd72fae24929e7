use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use plltm::eval::top_terms;

use super::{check_vocabularies, create, model_language, read_corpus, read_model};
use crate::error::CliResult;

#[derive(Debug, Args)]
pub struct TopicsArgs {
    #[arg(long)]
    model: PathBuf,
    /// Training corpus, for its vocabularies and label names.
    #[arg(long)]
    corpus: PathBuf,
    /// Terms per topic.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Only this corpus language; every modeled language by default.
    #[arg(long)]
    language: Option<usize>,
    /// TSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One row per topic and language: `topic  label  language  term_1 .. term_n`.
/// The label column is `-` for unlabeled models and topics beyond the label
/// set.
pub fn run(args: TopicsArgs) -> CliResult {
    let model = read_model(&args.model)?;
    let corpus = read_corpus(&args.corpus)?;
    check_vocabularies(&model, &corpus, "topics")?;
    let languages: Vec<usize> = match args.language {
        Some(l) => {
            model_language(&model, l)?;
            vec![l]
        }
        None => model.source_languages.clone(),
    };

    let mut rows = Vec::new();
    let header: Vec<String> = (1..=args.n).map(|i| format!("term_{i}")).collect();
    rows.push(format!("topic\tlabel\tlanguage\t{}", header.join("\t")));
    for k in 0..model.num_topics() {
        let label = match corpus.label_names.get(k) {
            Some(name) if model.config.use_labels => name.as_str(),
            _ => "-",
        };
        for &l in &languages {
            let m = model.model_language(l).expect("checked above");
            let vocab = &corpus.vocabularies[l];
            let terms: Vec<&str> = top_terms(&model, k, m, args.n)?
                .into_iter()
                .map(|(t, _)| vocab.term(t).expect("term id within vocabulary"))
                .collect();
            rows.push(format!("{k}\t{label}\t{l}\t{}", terms.join("\t")));
        }
    }
    let text = rows.join("\n") + "\n";
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
