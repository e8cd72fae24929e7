//! Synthetic corpora with known ground truth, an exact posterior for tiny
//! instances, and topic matching for recovery scores.

mod exact;
mod generate;
mod matching;
mod truth_io;

pub use exact::{exact_posterior, flatten_assignments, ExactPosterior, ENUMERATION_LIMIT};
pub use generate::{generate_corpus, sample_dirichlet, GroundTruth, SynthSpec};
pub use matching::{match_topics, TopicMatching};
pub use truth_io::{decode_ground_truth, encode_ground_truth, load_ground_truth, save_ground_truth};
