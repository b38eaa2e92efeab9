use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] risd2d_core::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0} validation check(s) failed")]
    ValidationFailed(usize),
}

/// Machine-readable error report written to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub category: &'static str,
    pub message: String,
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.category(),
            CliError::Config(_) => "config",
            CliError::UnknownExperiment(_) => "unknown-experiment",
            CliError::Io { .. } => "io",
            CliError::ValidationFailed(_) => "validation-failed",
        }
    }

    /// Process exit code; stable per category.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "config" => 2,
            "unknown-experiment" => 3,
            "io" => 4,
            "validation-failed" => 5,
            "domain" => 10,
            "constraint" => 11,
            "infeasible" => 12,
            "invalid-mode" => 13,
            "conditioning" => 14,
            "quadrature" => 15,
            "invalid-argument" => 16,
            _ => 1,
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            category: self.category(),
            message: self.to_string(),
        }
    }
}
