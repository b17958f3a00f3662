//! Metrics, stratified folds, the synthetic corpus and end-to-end evaluation.

mod folds;
mod metrics;
mod pipeline;
mod synth;

pub use folds::{size_interval, stratified_folds, Fold, SizeInterval};
pub use metrics::{
    chunk_prf, f1, label_prf, pair_metrics, LabelPrf, LabelScore, PairClass, PairConfusion, PairMetrics, Prf,
};
pub use pipeline::*;
pub use synth::{
    case_id, generate_synthetic, shares_be_born_trigger, shares_know_love_time, PlannedPair, SyntheticConfig,
    SyntheticCorpus, FILLERS,
};
