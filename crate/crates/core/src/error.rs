use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty distribution")]
    EmptyDistribution,
    #[error("empty instance base")]
    EmptyBase,
    #[error("feature index {index} out of range for arity {arity}")]
    FeatureOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("instance count must be at least 1")]
    ZeroCount,
    #[error("tree format error at line {line}: {msg}")]
    TreeFormat { line: usize, msg: String },

    #[error("line {line}: {msg}")]
    Lexicon { line: usize, msg: String },
    #[error("lexicon is empty")]
    EmptyLexicon,
    #[error("invalid entry: {0}")]
    InvalidEntry(String),
    #[error("cannot align {word:?}: {phonemes} phonemes for {letters} letters")]
    CannotAlign {
        word: String,
        letters: usize,
        phonemes: usize,
    },
    #[error("alignment table line {line}: {msg}")]
    AlignTable { line: usize, msg: String },

    #[error("invalid system spec: {0}")]
    InvalidSystem(String),
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("empty word")]
    EmptyWord,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid fold plan: {0}")]
    InvalidFolds(String),
    #[error("t-test needs at least 2 samples per group, got {0}")]
    TooFewSamples(usize),
    #[error("fold {fold}: {source}")]
    InFold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
