use std::collections::HashSet;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use super::topics::ranked;
use crate::corpus::{TermId, Vocabulary};
use crate::error::{Error, Result};
use crate::model::TrainedModel;

/// Rank thresholds for building a word-intrusion task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntrusionConfig {
    /// Number of genuine terms shown.
    pub top_n: usize,
    /// The intruder must rank below this many terms in the probed topic.
    pub exclude_top: usize,
    /// The intruder must rank within this many terms of its home topic.
    pub home_top: usize,
}

impl Default for IntrusionConfig {
    fn default() -> Self {
        Self {
            top_n: 5,
            exclude_top: 30,
            home_top: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntrusionTask {
    pub topic: usize,
    pub language: usize,
    /// The probed topic's top terms plus the intruder, shuffled.
    pub terms: Vec<String>,
    pub intruder_position: usize,
    pub intruder_term: TermId,
    pub intruder_home_topic: usize,
}

/// Hides one improbable term of `topic` that ranks highly in another topic
/// among the topic's most probable terms.
pub fn generate_intrusion_task<R: Rng + ?Sized>(
    model: &TrainedModel,
    vocab: &Vocabulary,
    topic: usize,
    language: usize,
    config: &IntrusionConfig,
    rng: &mut R,
) -> Result<IntrusionTask> {
    let phi = model.phi.get(language).ok_or_else(|| {
        Error::Config(format!(
            "language {language} does not exist; the model has {}",
            model.num_languages()
        ))
    })?;
    let (k, v) = (phi.rows(), phi.cols());
    if k < 2 {
        return Err(Error::Config("word intrusion needs at least two topics".into()));
    }
    if topic >= k {
        return Err(Error::Config(format!("topic {topic} does not exist; the model has {k}")));
    }
    if config.top_n == 0 || config.top_n > config.exclude_top || v <= config.exclude_top {
        return Err(Error::Config(format!(
            "intrusion thresholds need 0 < top_n <= exclude_top < vocabulary size (top_n {}, exclude_top {}, V {v})",
            config.top_n, config.exclude_top
        )));
    }
    if vocab.len() != v {
        return Err(Error::Config(format!(
            "vocabulary has {} terms, model language {language} has {v}",
            vocab.len()
        )));
    }

    let probe = ranked(phi.row(topic), config.exclude_top);
    let excluded: HashSet<TermId> = probe.iter().map(|&(t, _)| t).collect();

    // candidate term -> (home topic, its probability there)
    let mut candidates: Vec<(TermId, usize, f64)> = Vec::new();
    for other in (0..k).filter(|&o| o != topic) {
        for (t, p) in ranked(phi.row(other), config.home_top) {
            if excluded.contains(&t) {
                continue;
            }
            match candidates.iter_mut().find(|c| c.0 == t) {
                Some(c) if p > c.2 => *c = (t, other, p),
                Some(_) => {}
                None => candidates.push((t, other, p)),
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoIntruderCandidates { topic, language });
    }
    candidates.sort_by_key(|c| c.0);
    let (intruder, home, _) = candidates[rng.random_range(0..candidates.len())];

    let mut shown: Vec<TermId> = probe[..config.top_n].iter().map(|&(t, _)| t).collect();
    shown.push(intruder);
    let mut order: Vec<usize> = (0..shown.len()).collect();
    order.shuffle(rng);
    let intruder_position = order.iter().position(|&i| i == config.top_n).expect("intruder present");
    let terms = order
        .iter()
        .map(|&i| vocab.term(shown[i]).expect("term id within vocabulary").to_owned())
        .collect();

    Ok(IntrusionTask {
        topic,
        language,
        terms,
        intruder_position,
        intruder_term: intruder,
        intruder_home_topic: home,
    })
}

/// Writes the tasks (without answers) and the answer key as TSV.
///
/// Tasks: `topic  language  term_1 .. term_n`.
/// Key: `topic  language  intruder_position  intruder  home_topic`.
pub fn write_intrusion_tasks<W: Write, K: Write>(tasks: &[IntrusionTask], out: &mut W, key: &mut K) -> io::Result<()> {
    let width = tasks.first().map_or(6, |t| t.terms.len());
    let header: Vec<String> = (1..=width).map(|i| format!("term_{i}")).collect();
    writeln!(out, "topic\tlanguage\t{}", header.join("\t"))?;
    writeln!(key, "topic\tlanguage\tintruder_position\tintruder\thome_topic")?;
    for task in tasks {
        writeln!(out, "{}\t{}\t{}", task.topic, task.language, task.terms.join("\t"))?;
        writeln!(
            key,
            "{}\t{}\t{}\t{}\t{}",
            task.topic,
            task.language,
            task.intruder_position,
            task.terms[task.intruder_position],
            task.intruder_home_topic
        )?;
    }
    Ok(())
}
