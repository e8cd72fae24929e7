use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use plltm::eval::{generate_intrusion_task, write_intrusion_tasks, IntrusionConfig};
use plltm::rng::stream;
use plltm::Error;

use super::{check_vocabularies, create, model_language, read_corpus, read_model};
use crate::error::{usage, CliResult};
use crate::manifest::{with_suffix, ManifestBuilder};

#[derive(Debug, Args)]
pub struct IntrudeArgs {
    #[arg(long)]
    model: PathBuf,
    /// Training corpus, for its vocabularies.
    #[arg(long)]
    corpus: PathBuf,
    /// A single topic; every topic by default.
    #[arg(long)]
    topic: Option<usize>,
    /// Corpus language the terms are drawn from.
    #[arg(long, default_value_t = 0)]
    language: usize,
    /// Topic k uses random stream k of this seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Genuine terms shown per task.
    #[arg(long, default_value_t = 5)]
    top_n: usize,
    /// The intruder ranks below this many terms of the probed topic.
    #[arg(long, default_value_t = 30)]
    exclude_top: usize,
    /// The intruder ranks within this many terms of its home topic.
    #[arg(long, default_value_t = 10)]
    home_top: usize,
    /// Tasks TSV.
    #[arg(long)]
    out: PathBuf,
    /// Answer key TSV; defaults to `<out>.key`.
    #[arg(long)]
    key: Option<PathBuf>,
}

pub fn run(args: IntrudeArgs) -> CliResult {
    let mut manifest = ManifestBuilder::new("intrude", args.seed);
    manifest.input(&args.model).input(&args.corpus);
    let model = read_model(&args.model)?;
    let corpus = read_corpus(&args.corpus)?;
    check_vocabularies(&model, &corpus, "intrusion")?;
    let m = model_language(&model, args.language)?;
    let vocab = &corpus.vocabularies[args.language];
    let config = IntrusionConfig {
        top_n: args.top_n,
        exclude_top: args.exclude_top,
        home_top: args.home_top,
    };
    let topics: Vec<usize> = match args.topic {
        Some(k) if k < model.num_topics() => vec![k],
        Some(k) => return usage(format!("--topic {k} does not exist; the model has {}", model.num_topics())),
        None => (0..model.num_topics()).collect(),
    };

    let mut tasks = Vec::new();
    for k in topics {
        let mut rng = stream(args.seed, k as u64);
        match generate_intrusion_task(&model, vocab, k, m, &config, &mut rng) {
            Ok(mut task) => {
                task.language = args.language;
                tasks.push(task);
            }
            Err(Error::NoIntruderCandidates { .. }) if args.topic.is_none() => {
                eprintln!("topic {k}: no intruder candidate, skipped");
            }
            Err(e) => return Err(e.into()),
        }
    }
    if tasks.is_empty() {
        return Err(anyhow::anyhow!("no topic yielded an intrusion task").into());
    }

    let key_path = args.key.clone().unwrap_or_else(|| with_suffix(&args.out, "key"));
    let mut out = create(&args.out)?;
    let mut key = create(&key_path)?;
    write_intrusion_tasks(&tasks, &mut out, &mut key)
        .and_then(|()| out.flush())
        .and_then(|()| key.flush())
        .context("writing intrusion tasks")?;
    manifest.output(&args.out).output(&key_path);
    println!("{} intrusion tasks", tasks.len());
    manifest.write_next_to(&args.out)?;
    Ok(())
}
