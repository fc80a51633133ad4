use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // decoding
    #[error("malformed WAV header: {0}")]
    MalformedHeader(String),
    #[error("unsupported WAV encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("truncated WAV data: declared {declared} bytes, found {found}")]
    TruncatedData { declared: usize, found: usize },

    // framing and kernels
    #[error("buffer of {len} samples is shorter than the {window}-sample window")]
    BufferTooShort { len: usize, window: usize },
    #[error("invalid window plan: {0}")]
    InvalidPlan(String),
    #[error("frame of {len} samples is too short (need at least {min})")]
    FrameTooShort { len: usize, min: usize },
    #[error("frame has zero energy")]
    DegenerateFrame,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    // features
    #[error("unknown feature id `{0}`")]
    UnknownFeatureId(String),
    #[error("duplicate feature id `{0}` in selection")]
    DuplicateFeatureId(String),
    #[error("feature selection is empty")]
    EmptySelection,

    // leakage metrics
    #[error("no attributes supplied")]
    EmptyAttributes,
    #[error("baseline accuracy for `{0}` must be positive")]
    NonPositiveBaseline(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),

    // selection
    #[error("missing scores for feature `{0}`")]
    MissingFeatureScores(String),
    #[error("malformed score file {file}: {reason}")]
    MalformedScores { file: String, reason: String },
    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("latency budget must be positive and finite, got {0}")]
    InvalidBudget(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
