//! Combining the two answer streams, and scoring systems against a test set.

mod eval;
mod fuse;
mod metrics;

pub use eval::{evaluate, load_testset, parse_testset, render_table, score_response, EvalReport, GoldPassage, InstanceResult, QaSystem, Scores, TestInstance};
pub use fuse::{fuse, FusionPolicy, ResponseItem, Source, SystemResponse};
pub use metrics::{accuracy_ratio, exact_match, exact_recall, semantic_accuracy, semantic_recall, DEFAULT_TAU, TOP_N};
