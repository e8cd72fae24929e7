use serde::{Deserialize, Serialize};

use super::{EmptyLabelPolicy, ModelConfig};
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};

pub type TopicId = u32;

/// The topics each document may use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMask {
    permitted: Vec<Vec<TopicId>>,
}

impl LabelMask {
    /// Every document may use every topic.
    pub fn full(num_documents: usize, num_topics: usize) -> Self {
        let all: Vec<TopicId> = (0..num_topics as TopicId).collect();
        Self {
            permitted: vec![all; num_documents],
        }
    }

    /// Takes per-document topic lists; each list is sorted and deduplicated.
    pub fn from_sets(mut permitted: Vec<Vec<TopicId>>) -> Self {
        for set in &mut permitted {
            set.sort_unstable();
            set.dedup();
        }
        Self { permitted }
    }

    pub fn num_documents(&self) -> usize {
        self.permitted.len()
    }

    pub fn permitted(&self, d: usize) -> &[TopicId] {
        &self.permitted[d]
    }

    pub fn contains(&self, d: usize, k: TopicId) -> bool {
        self.permitted[d].binary_search(&k).is_ok()
    }

    pub fn sets(&self) -> &[Vec<TopicId>] {
        &self.permitted
    }
}

/// Permitted topics for one document under the given configuration.
pub fn document_topics(doc: &Document, config: &ModelConfig) -> Result<Vec<TopicId>> {
    let k = config.num_topics;
    if !config.use_labels {
        return Ok((0..k as TopicId).collect());
    }
    if let Some(&label) = doc.labels.iter().find(|&&l| l as usize >= k) {
        return Err(Error::LabelOutOfRange {
            doc_id: doc.doc_id.clone(),
            label,
            num_labels: k,
        });
    }
    if doc.labels.is_empty() {
        return match config.empty_labels {
            EmptyLabelPolicy::AllTopics => Ok((0..k as TopicId).collect()),
            EmptyLabelPolicy::Strict => Err(Error::EmptyLabelSet {
                doc_id: doc.doc_id.clone(),
            }),
        };
    }
    Ok(doc.labels.clone())
}

pub fn build_label_mask(corpus: &Corpus, config: &ModelConfig) -> Result<LabelMask> {
    let permitted = corpus
        .documents
        .iter()
        .map(|doc| document_topics(doc, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabelMask::from_sets(permitted))
}
