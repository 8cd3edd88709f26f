//! Error type shared by every module.

/// Errors raised by decayproj operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{op}: invalid argument: {reason}")]
    InvalidArgument { op: &'static str, reason: String },

    #[error("{op}: dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("degenerate spectral interval [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },

    #[error("chi = {chi} is not admissible (requires 1 < chi < {chi_bar})")]
    InadmissibleChi { chi: f64, chi_bar: f64 },

    #[error("{op}: matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite {
        op: &'static str,
        index: usize,
        pivot: f64,
    },

    #[error("eigenvalue {eigenvalue} lies within {tol} of the Fermi level {mu}")]
    EigenvalueAtFermiLevel { mu: f64, eigenvalue: f64, tol: f64 },

    #[error("{op}: no convergence after {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },

    #[error("distance table covers radius {available}, {needed} requested")]
    InsufficientRadius { needed: usize, available: usize },

    #[error("matrix spectrum not contained in [-1, 1] (estimated [{lo}, {hi}])")]
    NotNormalized { lo: f64, hi: f64 },

    #[error("{op}: singular system at row {index}")]
    Singular { op: &'static str, index: usize },

    #[error("{op}: precondition violated: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(op: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            reason: reason.into(),
        }
    }

    /// True for errors caused by input files or formats rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Io(_) | Error::Json(_) | Error::Csv(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
