//! Linear-chain conditional random field shared by both labeling rounds.

mod features;
mod io;
mod model;
mod train;

pub use features::{extract_strings, FeatureTable, ObservationInput, Template, POSITION_CLIP};
pub use io::{model_to_bytes, read_model, write_model, MODEL_MAGIC};
pub use model::{CrfModel, Lattice, Observation};
pub use train::{train, TrainConfig, TrainOutcome};

use crate::error::CrfError;
use crate::schema::{Tag, Vocabulary};

/// Builds a feature table from training inputs, in first-seen order.
pub fn build_feature_table<'a>(
    templates: &[Template],
    inputs: impl IntoIterator<Item = &'a ObservationInput>,
) -> FeatureTable {
    let mut table = FeatureTable::new();
    for input in inputs {
        for pos in extract_strings(templates, input) {
            for f in pos {
                table.intern(&f);
            }
        }
    }
    table
}

pub fn tag_indices(vocab: &Vocabulary, tags: &[Tag]) -> Result<Vec<usize>, CrfError> {
    tags.iter()
        .map(|t| {
            vocab
                .index_of(*t)
                .ok_or_else(|| CrfError::Schema(crate::error::SchemaError::UnknownTag(t.to_string())))
        })
        .collect()
}
