use std::path::PathBuf;

use kerr_stokes::Issue;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration has {} validation error(s)", .0.len())]
    Validation(Vec<Issue>),

    #[error("unknown figure id {0}")]
    UnknownFigure(u32),

    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{failed} of {total} verification checks failed")]
    VerifyFailed { failed: usize, total: usize },

    #[error(transparent)]
    Model(#[from] kerr_stokes::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) => 1,
            Self::Validation(_) | Self::UnknownFigure(_) | Self::Model(_) => 2,
            Self::Io { .. } => 3,
            Self::VerifyFailed { .. } => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Parse(_) => "parse",
            Self::Validation(_) => "validation",
            Self::UnknownFigure(_) => "unknown_figure",
            Self::Io { .. } => "io",
            Self::VerifyFailed { .. } => "verify",
            Self::Model(_) => "model",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        let issues = match self {
            Self::Validation(issues) => Some(issues.clone()),
            Self::Model(kerr_stokes::Error::Validation(issues)) => Some(issues.clone()),
            _ => None,
        };
        if let Some(issues) = issues {
            v["issues"] = serde_json::to_value(issues).expect("issues serialize");
        }
        if let Self::Io { path, .. } = self {
            v["path"] = json!(path.display().to_string());
        }
        v
    }
}
