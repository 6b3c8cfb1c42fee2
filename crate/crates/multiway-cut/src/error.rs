use thiserror::Error;

/// Errors shared across the crate.
///
/// Domain violations carry enough context to be reported on one line;
/// parse errors carry the offending line number.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} has no label")]
    MissingLabel { vertex: usize },

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("case {case} is not applicable at (u1, u2) = ({u1}, {u2})")]
    InapplicableCase { case: String, u1: f64, u2: f64 },

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("linear program is malformed: {0}")]
    MalformedLp(String),

    #[error("linear program did not converge after {iterations} iterations")]
    LpIterationLimit { iterations: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:.3e})")]
    Asymmetric { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-parseable code, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSimplexPoint(_) => "bad-simplex-point",
            Error::InvalidEdge(_) => "bad-edge",
            Error::InvalidEmbedding(_) => "bad-embedding",
            Error::InvalidGraph(_) => "bad-graph",
            Error::MissingLabel { .. } => "missing-label",
            Error::InvalidDensity(_) => "bad-density",
            Error::Domain(_) => "domain",
            Error::InapplicableCase { .. } => "inapplicable-case",
            Error::InvalidMixture(_) => "bad-mixture",
            Error::MalformedLp(_) => "bad-lp",
            Error::LpIterationLimit { .. } => "lp-iteration-limit",
            Error::Parse { .. } => "parse",
            Error::TooLarge(_) => "too-large",
            Error::Asymmetric { .. } => "asymmetric",
            Error::NotPositiveSemidefinite { .. } => "not-psd",
            Error::Io(_) => "io",
        }
    }
}
