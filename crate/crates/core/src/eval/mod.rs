//! Held-out evaluation and topic inspection: fold-in inference,
//! perplexity, top terms and word-intrusion tasks.

mod fold_in;
mod intrusion;
mod perplexity;
mod topics;

pub use fold_in::{fold_in, fold_in_all, FoldInOptions};
pub use intrusion::{generate_intrusion_task, write_intrusion_tasks, IntrusionConfig, IntrusionTask};
pub use perplexity::{
    evaluate, perplexity, perplexity_curve, prepare_splits, write_perplexity_csv, CurveOptions,
    PerplexityReport, PreparedSplits,
};
pub use topics::top_terms;
