use std::collections::{HashMap, HashSet};

use super::{Corpus, Document, LabelId, RawDocument, TermId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    language: usize,
    terms: Vec<String>,
    index: HashMap<String, TermId>,
}

impl Vocabulary {
    /// Fails on duplicate or empty term lists.
    pub fn new(language: usize, terms: Vec<String>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Config(format!("vocabulary for language {language} is empty")));
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (id, term) in terms.iter().enumerate() {
            if index.insert(term.clone(), id as TermId).is_some() {
                return Err(Error::Config(format!(
                    "duplicate term `{term}` in vocabulary for language {language}"
                )));
            }
        }
        Ok(Self {
            language,
            terms,
            index,
        })
    }

    pub fn language(&self) -> usize {
        self.language
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: TermId) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn id(&self, term: &str) -> Option<TermId> {
        self.index.get(term).copied()
    }

    pub(crate) fn with_language(&self, language: usize) -> Self {
        Self {
            language,
            ..self.clone()
        }
    }
}

/// Collects the terms of one language whose corpus frequency reaches
/// `min_count` and which are not stopwords. Terms are ordered by
/// descending frequency, ties lexicographically.
pub fn build_vocabulary(
    raw_docs: &[RawDocument],
    language: usize,
    min_count: u64,
    stopwords: &HashSet<String>,
) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::Config("min_count must be at least 1".into()));
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for doc in raw_docs {
        if let Some(block) = doc.tokens.get(language) {
            for tok in block {
                *counts.entry(tok.as_str()).or_default() += 1;
            }
        }
    }
    let mut kept: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(term, n)| n >= min_count && !stopwords.contains(term))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary {
            language,
            min_count,
            stopwords: stopwords.len(),
        });
    }
    kept.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Vocabulary::new(language, kept.into_iter().map(|(t, _)| t.to_owned()).collect())
}

#[derive(Debug, Clone)]
pub struct EncodedCorpus {
    pub corpus: Corpus,
    /// Ids of documents dropped because nothing survived encoding.
    pub dropped: Vec<String>,
}

/// Maps raw tokens to vocabulary ids, dropping out-of-vocabulary tokens,
/// and label strings to their position in `label_names`.
pub fn encode_corpus(
    raw_docs: &[RawDocument],
    vocabularies: &[Vocabulary],
    label_names: &[String],
) -> Result<EncodedCorpus> {
    let label_index: HashMap<&str, LabelId> = label_names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i as LabelId))
        .collect();

    let mut documents = Vec::with_capacity(raw_docs.len());
    let mut dropped = Vec::new();
    for raw in raw_docs {
        if raw.tokens.len() > vocabularies.len() {
            return Err(Error::LanguageOutOfRange {
                doc_id: raw.doc_id.clone(),
                language: raw.tokens.len() - 1,
                num_languages: vocabularies.len(),
            });
        }
        let mut labels = Vec::with_capacity(raw.labels.len());
        for label in &raw.labels {
            let id = label_index.get(label.as_str()).ok_or_else(|| Error::UnknownLabel {
                doc_id: raw.doc_id.clone(),
                label: label.clone(),
            })?;
            labels.push(*id);
        }
        let tokens: Vec<Vec<TermId>> = vocabularies
            .iter()
            .enumerate()
            .map(|(l, vocab)| {
                raw.tokens
                    .get(l)
                    .map(|block| block.iter().filter_map(|t| vocab.id(t)).collect())
                    .unwrap_or_default()
            })
            .collect();
        let doc = Document::new(raw.doc_id.clone(), tokens, labels);
        if doc.is_empty() {
            dropped.push(raw.doc_id.clone());
        } else {
            documents.push(doc);
        }
    }
    Ok(EncodedCorpus {
        corpus: Corpus {
            documents,
            vocabularies: vocabularies.to_vec(),
            label_names: label_names.to_vec(),
        },
        dropped,
    })
}
