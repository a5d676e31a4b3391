use demon_core::CoreError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config error{}{}: {message}", key.as_ref().map(|k| format!(" at key `{k}`")).unwrap_or_default(), line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { message: String, key: Option<String>, line: Option<usize> },

    #[error("experiment `{experiment}` failed: {source}")]
    Experiment { experiment: String, source: CoreError },

    #[error("grid has {size} points, more than the limit of {limit}")]
    GridTooLarge { size: u128, limit: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("acceptance failed: {}", failed.join(", "))]
    Verify { failed: Vec<String> },
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self::Config { message: message.into(), key: None, line: None }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Config { .. } => "config",
            Self::Experiment { .. } => "experiment",
            Self::GridTooLarge { .. } => "grid",
            Self::Io { .. } => "io",
            Self::Verify { .. } => "verify",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verify { .. } => 1,
            Self::Usage(_) | Self::Config { .. } | Self::GridTooLarge { .. } => 2,
            Self::Experiment { .. } => 3,
            Self::Io { .. } => 4,
        }
    }

    /// Machine-readable form written to stderr on failure.
    pub fn to_json(&self) -> Value {
        let mut detail = json!({ "kind": self.kind(), "message": self.to_string() });
        let obj = detail.as_object_mut().expect("object literal");
        match self {
            Self::Config { key, line, .. } => {
                obj.insert("key".into(), json!(key));
                obj.insert("line".into(), json!(line));
            }
            Self::Experiment { experiment, .. } => {
                obj.insert("experiment".into(), json!(experiment));
            }
            Self::GridTooLarge { size, limit } => {
                obj.insert("size".into(), json!(size.to_string()));
                obj.insert("limit".into(), json!(limit));
            }
            Self::Io { path, .. } => {
                obj.insert("path".into(), json!(path));
            }
            Self::Verify { failed } => {
                obj.insert("failed".into(), json!(failed));
            }
            Self::Usage(_) => {}
        }
        json!({ "error": detail })
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
