use std::path::PathBuf;

use thiserror::Error;

/// Harness failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("missing artifacts:\n{}", list_paths(.0))]
    MissingArtifacts(Vec<PathBuf>),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("accounting check failed: {0}")]
    Accounting(String),

    #[error("malformed artifact {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },

    #[error(transparent)]
    Core(#[from] qapwalk::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn list_paths(paths: &[PathBuf]) -> String {
    paths
        .iter()
        .map(|p| format!("  {}", p.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

impl BenchError {
    /// 2 for configuration problems, 3 for missing inputs, 4 for numeric or
    /// accounting failures, 1 for anything else (I/O, serialization).
    pub fn exit_code(&self) -> i32 {
        use qapwalk::Error as E;
        match self {
            BenchError::Config(_) => 2,
            BenchError::MissingArtifacts(_) => 3,
            BenchError::Numeric(_) | BenchError::Accounting(_) => 4,
            BenchError::Core(e) => match e {
                E::Numeric(_) | E::Degenerate => 4,
                E::TooLarge { .. } | E::InvalidParameter(_) | E::Range(_) => 2,
                E::MissingOptimum => 3,
                _ => 1,
            },
            BenchError::Malformed { .. } | BenchError::Io(_) | BenchError::Csv(_) | BenchError::Json(_) => 1,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
