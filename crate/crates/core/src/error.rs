use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("unknown tag `{0}`")]
    UnknownTag(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("`{0}` is not a final-vocabulary tag with a transition mapping")]
    UnmappedRole(String),
    #[error("tag vocabulary must start with O")]
    VocabularyWithoutO,
    #[error("duplicate tag `{0}` in vocabulary")]
    DuplicateTag(String),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: sentence {sentence} has {tokens} tokens but {labels} labels")]
    LengthMismatch {
        line: usize,
        sentence: usize,
        tokens: usize,
        labels: usize,
    },
    #[error("line {line}: sentence {sentence} labels are not BIO-valid at {positions:?}")]
    InvalidBio {
        line: usize,
        sentence: usize,
        positions: Vec<usize>,
    },
    #[error("line {line}: duplicate doc_id `{doc_id}`")]
    DuplicateDocId { line: usize, doc_id: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{file}:{line}: {message}")]
    Malformed { file: String, line: usize, message: String },
    #[error("word `{0}` is listed as both positive and negative")]
    PolarityOverlap(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum CrfError {
    #[error("observation sequence is empty")]
    EmptySequence,
    #[error("every tag sequence is forbidden by the constraint set")]
    Degenerate,
    #[error("gold sequence length {gold} does not match observation length {obs}")]
    LengthMismatch { gold: usize, obs: usize },
    #[error("gold tag index {0} is outside the tag set")]
    GoldOutOfRange(usize),
    #[error("gold sequence uses a forbidden transition at position {0}")]
    GoldForbidden(usize),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("non-finite loss in epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("sentence {sentence}: {source}")]
    Decode {
        sentence: usize,
        #[source]
        source: CrfError,
    },
    #[error("trigger chunk has no event type: {0}")]
    UnknownTrigger(String),
    #[error("model tag set does not match the {0} vocabulary")]
    ModelMismatch(&'static str),
}

#[derive(Debug, Error)]
pub enum AlignError {
    #[error("unknown attribute kind `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Error)]
pub enum ConflictError {
    #[error("pair mixes event types {0} and {1}")]
    TypeMismatch(String, String),
    #[error("pair does not join opposite parties")]
    SameParty,
    #[error("non-unique {0} pair was not aligned on its key attributes")]
    NotAligned(String),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("fold {0} has an empty test set")]
    EmptyFold(usize),
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error(transparent)]
    Crf(#[from] CrfError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}
