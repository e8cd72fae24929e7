//! Multilingual labeled corpora: vocabularies, encoded documents, the
//! text file format and the held-out split.

mod io;
mod split;
mod vocab;

pub use io::{corpus_sidecar_paths, load_corpus, read_raw_documents, save_corpus, RawCorpus};
pub use split::{split_held_out, HeldOutSplit};
pub use vocab::{build_vocabulary, encode_corpus, EncodedCorpus, Vocabulary};

use crate::error::{Error, Result};

pub type TermId = u32;
pub type LabelId = u32;

/// A document before vocabulary encoding. `tokens[l]` holds the
/// pre-tokenized text of language `l`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawDocument {
    pub doc_id: String,
    pub labels: Vec<String>,
    pub tokens: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    /// One token-id sequence per language; a block may be empty.
    pub tokens: Vec<Vec<TermId>>,
    /// Sorted, deduplicated label ids.
    pub labels: Vec<LabelId>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, tokens: Vec<Vec<TermId>>, mut labels: Vec<LabelId>) -> Self {
        labels.sort_unstable();
        labels.dedup();
        Self {
            doc_id: doc_id.into(),
            tokens,
            labels,
        }
    }

    pub fn num_languages(&self) -> usize {
        self.tokens.len()
    }

    pub fn len_in(&self, language: usize) -> usize {
        self.tokens.get(language).map_or(0, Vec::len)
    }

    pub fn total_tokens(&self) -> usize {
        self.tokens.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.iter().all(Vec::is_empty)
    }

    /// Keeps only the listed languages, in the listed order.
    pub fn project(&self, languages: &[usize]) -> Document {
        Document {
            doc_id: self.doc_id.clone(),
            tokens: languages
                .iter()
                .map(|&l| self.tokens.get(l).cloned().unwrap_or_default())
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub vocabularies: Vec<Vocabulary>,
    pub label_names: Vec<String>,
}

impl Corpus {
    /// Builds a corpus after checking every document against the
    /// vocabularies and label names.
    pub fn new(
        documents: Vec<Document>,
        vocabularies: Vec<Vocabulary>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let corpus = Self {
            documents,
            vocabularies,
            label_names,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn validate(&self) -> Result<()> {
        let num_languages = self.vocabularies.len();
        for doc in &self.documents {
            if doc.tokens.len() > num_languages {
                return Err(Error::LanguageOutOfRange {
                    doc_id: doc.doc_id.clone(),
                    language: doc.tokens.len() - 1,
                    num_languages,
                });
            }
            for (l, block) in doc.tokens.iter().enumerate() {
                let vocab_size = self.vocabularies[l].len();
                if let Some(&token) = block.iter().find(|&&t| t as usize >= vocab_size) {
                    return Err(Error::TokenOutOfRange {
                        doc_id: doc.doc_id.clone(),
                        language: l,
                        token,
                        vocab_size,
                    });
                }
            }
            if let Some(&label) = doc.labels.iter().find(|&&k| k as usize >= self.label_names.len()) {
                return Err(Error::LabelOutOfRange {
                    doc_id: doc.doc_id.clone(),
                    label,
                    num_labels: self.label_names.len(),
                });
            }
        }
        Ok(())
    }

    pub fn num_documents(&self) -> usize {
        self.documents.len()
    }

    pub fn num_languages(&self) -> usize {
        self.vocabularies.len()
    }

    pub fn num_labels(&self) -> usize {
        self.label_names.len()
    }

    pub fn vocab_sizes(&self) -> Vec<usize> {
        self.vocabularies.iter().map(Vocabulary::len).collect()
    }

    pub fn token_count(&self, language: usize) -> usize {
        self.documents.iter().map(|d| d.len_in(language)).sum()
    }

    /// Restricts the corpus to a subset of its languages (used to train the
    /// unilingual variants on one language of a polylingual corpus).
    /// Documents left with no tokens are kept; the sampler tolerates them.
    pub fn select_languages(&self, languages: &[usize]) -> Result<Corpus> {
        let mut vocabularies = Vec::with_capacity(languages.len());
        for (new_id, &l) in languages.iter().enumerate() {
            let vocab = self.vocabularies.get(l).ok_or_else(|| {
                Error::Config(format!(
                    "language {l} does not exist; the corpus has {} languages",
                    self.num_languages()
                ))
            })?;
            vocabularies.push(vocab.with_language(new_id));
        }
        Ok(Corpus {
            documents: self.documents.iter().map(|d| d.project(languages)).collect(),
            vocabularies,
            label_names: self.label_names.clone(),
        })
    }

    /// Same vocabularies and labels, a different document list.
    pub fn with_documents(&self, documents: Vec<Document>) -> Corpus {
        Corpus {
            documents,
            vocabularies: self.vocabularies.clone(),
            label_names: self.label_names.clone(),
        }
    }
}
