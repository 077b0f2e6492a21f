use thiserror::Error;

/// Errors surfaced by every operation in the crate. Each variant has a stable
/// machine-readable code used by the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation not supported on this backend: {0}")]
    UnsupportedBackend(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("not a ring: {0}")]
    NotARing(String),
    #[error("ring too large: {size} elements exceeds bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("stabilization cap of {0} steps exceeded")]
    StabilizationCapExceeded(usize),
    #[error("not implemented: {0}")]
    NotImplemented(String),
    #[error("a degree window is required for graded computations")]
    WindowRequired,
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("not a ring homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not a meet-semilattice with top: {0}")]
    NotASemilattice(String),
    #[error("support routes disagree: {0}")]
    InconsistentSupport(String),
    #[error("truncation window insufficient: {0}")]
    TruncationWindowInsufficient(String),
    #[error("derived tensor needs a degreewise projective factor")]
    NotFlat,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedBackend(_) => "unsupported-backend",
            Error::RingMismatch(_) => "ring-mismatch",
            Error::NotARing(_) => "not-a-ring",
            Error::TooLarge { .. } => "too-large",
            Error::StabilizationCapExceeded(_) => "stabilization-cap-exceeded",
            Error::NotImplemented(_) => "not-implemented",
            Error::WindowRequired => "window-required",
            Error::BackendMismatch(_) => "backend-mismatch",
            Error::NotAMorphism(_) => "not-a-morphism",
            Error::NotAHomomorphism(_) => "not-a-homomorphism",
            Error::NotASemilattice(_) => "not-a-semilattice",
            Error::InconsistentSupport(_) => "inconsistent-support",
            Error::TruncationWindowInsufficient(_) => "truncation-window-insufficient",
            Error::NotFlat => "not-flat",
            Error::InvalidInput(_) => "invalid-input",
        }
    }

    /// Input errors are the caller's fault; everything else is a domain error.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
