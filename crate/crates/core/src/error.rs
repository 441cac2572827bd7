use thiserror::Error;

/// Errors surfaced by the exact-arithmetic core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("field mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("conductor {0} does not divide {1}, cannot embed")]
    BadEmbedding(u32, u32),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("curves share a common component")]
    CommonComponent,
    #[error("no admissible coordinate frame found after {0} attempts")]
    FrameExhausted(usize),
    #[error("catalog entry `{0}` not found")]
    UnknownEntry(String),
    #[error("catalog verification failed for `{name}`: {reason}")]
    CatalogVerification { name: String, reason: String },
    #[error("scenario `{0}` not found")]
    UnknownScenario(String),
    #[error("invalid input data: {0}")]
    DataError(String),
    #[error("group closure exceeded cap {0}; generator data is wrong")]
    GroupCapExceeded(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Writes a progress line to stderr when ARRFORGE_TRACE is set; used by the
/// long-running searches and censuses.
pub fn trace(msg: impl FnOnce() -> String) {
    static ON: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    if *ON.get_or_init(|| std::env::var_os("ARRFORGE_TRACE").is_some()) {
        eprintln!("[arrforge] {}", msg());
    }
}
