use thiserror::Error;

/// Errors raised by the cipher stages, attacks and file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not finite")]
    NonFinite(f64),

    #[error("magnitude of {0:e} exceeds the formatting guard")]
    FormatOverflow(f64),

    #[error("invalid format spec: {0}")]
    InvalidFormat(String),

    #[error("malformed token {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("value {value} drifted {drift:e} from code {nearest} (tolerance {tol})")]
    RoundingDrift {
        value: f64,
        nearest: f64,
        drift: f64,
        tol: f64,
    },

    #[error("value {0} rounds outside the byte range")]
    CodeRange(f64),

    #[error("matrix is singular or numerically not invertible")]
    SingularMatrix,

    #[error("key generation failed: {0}")]
    Keygen(String),

    #[error("no sign change of f(x) - {code} found in [{lo}, {hi}]")]
    NoRoot { code: u8, lo: f64, hi: f64 },

    #[error("root solver did not converge for code {code}: {reason}")]
    Convergence { code: u8, reason: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("key file line {line}: {reason}")]
    KeyFile { line: usize, reason: String },

    #[error("at index {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, index: usize) -> Self {
        Error::AtIndex {
            index,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_stage(self, stage: usize) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Strips index and stage context, returning the underlying error.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtIndex { source, .. } | Error::Stage { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
