use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to say
/// which quantity or factor was at fault.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular factor: constant term of denominator #{index} has no inverse")]
    SingularFactor { index: usize },

    #[error("evaluation at pole: {0}")]
    Pole(String),

    #[error("zero denominator in rational function")]
    ZeroDenominator,

    #[error("matrix of size {rows}x{cols} is not in GSp(2*{n})")]
    NotInGsp { rows: usize, cols: usize, n: usize },

    #[error("zero multiplier (matrix is singular)")]
    ZeroMultiplier,

    #[error("multiplier mismatch: {left} vs {right}")]
    MultiplierMismatch { left: String, right: String },

    #[error("not in Siegel parabolic: lower-left block is nonzero")]
    NotInSiegelParabolic,

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parity condition violated: {0}")]
    Parity(String),

    #[error("divergent: {0}")]
    Divergent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
