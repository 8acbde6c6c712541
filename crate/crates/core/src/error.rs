use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not in the upper half-plane (y must be > 0)")]
    NotInUpperHalfPlane,

    #[error("colour window exhausted: index {index} outside [{lo}, {hi})")]
    ColourWindowExhausted { index: i64, lo: i64, hi: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("witness not found at depth {depth} (search budget exhausted, not a proof of nonexistence)")]
    WitnessNotFound { depth: u32 },

    #[error("horizon exhausted: explicit window of horizon {horizon} cannot supply words of length {needed}")]
    HorizonExhausted { horizon: usize, needed: usize },

    #[error("invalid subshift spec: {0}")]
    InvalidSpec(String),

    #[error("unsupported spec: {0}")]
    Unsupported(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("refine N_max: function window of length {window} does not fit truncation level {level}")]
    RefineNMax { window: usize, level: usize },

    #[error("word {0:?} is not in the language")]
    NotInLanguage(String),

    #[error("precision exhausted: 2-adic coordinate has no digits left to halve")]
    PrecisionExhausted,

    #[error("algebraic arithmetic failed: {0}")]
    Algebraic(String),

    #[error("parse error: {0}")]
    Parse(String),
}
