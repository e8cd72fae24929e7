use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vocabulary for language {language} is empty after filtering (min_count = {min_count}, {stopwords} stopwords)")]
    EmptyVocabulary {
        language: usize,
        min_count: u64,
        stopwords: usize,
    },

    #[error("document `{doc_id}` has unknown label `{label}`")]
    UnknownLabel { doc_id: String, label: String },

    #[error("document `{doc_id}` has label id {label} but the corpus defines only {num_labels} labels")]
    LabelOutOfRange {
        doc_id: String,
        label: u32,
        num_labels: usize,
    },

    #[error("document `{doc_id}` has token id {token} in language {language} but the vocabulary holds {vocab_size} terms")]
    TokenOutOfRange {
        doc_id: String,
        language: usize,
        token: u32,
        vocab_size: usize,
    },

    #[error("document `{doc_id}` references language {language} but only {num_languages} languages are defined")]
    LanguageOutOfRange {
        doc_id: String,
        language: usize,
        num_languages: usize,
    },

    #[error("document `{doc_id}` has an empty label set (strict label policy)")]
    EmptyLabelSet { doc_id: String },

    #[error("document `{doc_id}` has {tokens} tokens in language {language}; at least 2 are needed for a held-out split")]
    TooFewTokens {
        doc_id: String,
        language: usize,
        tokens: usize,
    },

    #[error("document `{doc_id}` has no tokens in any language")]
    EmptyDocument { doc_id: String },

    #[error("no documents")]
    NoDocuments,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid model file: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("exact enumeration needs {size} assignment vectors (limit {limit})")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("no intruder candidates for topic {topic} in language {language}; relax the top-n thresholds")]
    NoIntruderCandidates { topic: usize, language: usize },

    #[error("{context}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
