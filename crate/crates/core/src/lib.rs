//! Topic models for multilingual, labeled document collections.
//!
//! One collapsed Gibbs sampler covers LDA, Labeled LDA, the unlabeled
//! polylingual model and its labeled extension. Each document shares one
//! topic mixture across its languages, and each topic has one term
//! distribution per language. Labels restrict which topics a document may
//! use.
//!
//! * [`corpus`]: vocabularies, encoded documents, file format, held-out splits
//! * [`model`]: configuration, sampler state, Gibbs sweeps, training
//! * [`eval`]: fold-in, held-out perplexity, top terms, word intrusion
//! * [`synth`]: synthetic corpora, exact posterior for tiny instances,
//!   topic matching
//!
//! With the default `parallel` feature, fold-in over held-out documents and
//! independent chains run on rayon. Without it the same code runs
//! sequentially and produces identical results.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod exec;
pub mod model;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
pub use exec::Execution;
