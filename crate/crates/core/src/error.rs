use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("`{name}` at byte {offset} expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        offset: usize,
        expected: String,
        found: usize,
    },

    #[error("not a self-map of the disk: |phi({witness})| = {modulus} >= 1")]
    NotASelfMap { witness: Complex64, modulus: f64 },

    #[error("degenerate sampling radius {0}; must lie in (0, 1)")]
    DegenerateRadius(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge (achieved error estimate {achieved:e})")]
    Quadrature { achieved: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("nodes {first} and {second} violate the separation bound {bound}")]
    SeparationViolated {
        first: usize,
        second: usize,
        bound: f64,
    },

    #[error("empty grid")]
    EmptyGrid,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Stable machine-readable tag, used as the `error[<kind>]` prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier { .. } => "unknown-identifier",
            Error::Arity { .. } => "arity",
            Error::NotASelfMap { .. } => "not-a-self-map",
            Error::DegenerateRadius(_) => "degenerate-radius",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Quadrature { .. } => "quadrature",
            Error::ParameterOutOfRange(_) => "parameter-out-of-range",
            Error::SeparationViolated { .. } => "separation",
            Error::EmptyGrid => "empty-grid",
            Error::PreconditionFailed(_) => "precondition",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }

    /// Errors caused by malformed input rather than by the mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::Arity { .. }
                | Error::InvalidArgument(_)
                | Error::ParameterOutOfRange(_)
                | Error::Config(_)
                | Error::Io(_)
        )
    }
}
