//! The labeled multilingual model: configuration, label masks,
//! sampler state, the collapsed Gibbs sweep and training.
//!
//! LDA, Labeled LDA and the Polylingual Topic Model are configurations of
//! the same sampler: one language and no labels, one language with labels,
//! several languages without labels.

mod config;
mod mask;
pub mod persist;
pub mod reference;
mod sampler;
mod state;
mod train;

pub use config::{EmptyLabelPolicy, ModelConfig, ModelVariant, DEFAULT_ALPHA, DEFAULT_BETA};
pub use mask::{build_label_mask, document_topics, LabelMask, TopicId};
pub use sampler::{full_conditional, gibbs_sweep, Sampler};
pub use state::{estimate_theta, init_state, Assignments, ModelState};
pub use train::{train, train_chains, train_with_progress, SweepProgress, TrainedModel, Trainer};

pub(crate) use sampler::sample_index;
pub(crate) use state::theta_from_counts;

/// Dense row-major matrix of `f64`, one row per topic.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn add_assign(&mut self, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for a in &mut self.data {
            *a *= factor;
        }
    }
}
