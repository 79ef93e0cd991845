use std::path::PathBuf;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("unknown solver `{0}`")]
    UnknownSolver(String),

    #[error(
        "explicit r_M = {r_m} does not exceed ratio {ratio} of (problem `{problem}`, solver `{solver}`)"
    )]
    RmTooSmall {
        r_m: f64,
        ratio: f64,
        problem: String,
        solver: String,
    },

    #[error("profiles cover different problem counts ({left} vs {right})")]
    MismatchedProblemCount { left: usize, right: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("selector matches no problems")]
    EmptySelection,

    #[error("cannot merge tables: {0}")]
    MergeConflict(String),

    #[error("harness configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Short machine-readable category, used as the CLI error prefix.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidTable(_) => "table",
            Error::UnknownSolver(_) => "solver",
            Error::RmTooSmall { .. } => "rm",
            Error::MismatchedProblemCount { .. } | Error::InvalidProfile(_) => "profile",
            Error::InvalidArgument(_) => "argument",
            Error::Parse { .. } => "parse",
            Error::EmptySelection => "subset",
            Error::MergeConflict(_) => "merge",
            Error::Config(_) => "config",
            Error::File { .. } | Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
