use std::path::PathBuf;

use thiserror::Error;

/// Broad class of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Solver,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("outside the validity regime: {0}")]
    RegimeViolation(String),

    #[error("non-unique steady state: trace-constrained Liouvillian is singular (pivot ratio {pivot_ratio:e})")]
    NonUniqueSteadyState { pivot_ratio: f64 },

    #[error("steady-state residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("time integration failed at t = {time}: {reason}")]
    IntegrationFailure { time: f64, reason: String },

    #[error("singular perturbative stage {stage}")]
    SingularStage { stage: usize },

    #[error("sweep point at delta = {delta} failed: {source}")]
    PointFailed {
        delta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("CSV header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },

    #[error("CSV line {line}: {reason}")]
    CsvParse { line: u64, reason: String },

    #[error("CSV contains no data rows")]
    EmptyCsv,

    #[error("unknown preset `{name}`; available: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. }
            | Error::NotHermitian { .. }
            | Error::InvalidState(_)
            | Error::InvalidParameter { .. }
            | Error::RegimeViolation(_)
            | Error::HeaderMismatch { .. }
            | Error::CsvParse { .. }
            | Error::EmptyCsv
            | Error::UnknownPreset { .. } => ErrorKind::Validation,
            Error::NonUniqueSteadyState { .. }
            | Error::ResidualTooLarge { .. }
            | Error::IntegrationFailure { .. }
            | Error::SingularStage { .. } => ErrorKind::Solver,
            Error::PointFailed { source, .. } => source.kind(),
            Error::Io { .. } => ErrorKind::Io,
        }
    }

    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
