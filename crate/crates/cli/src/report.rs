//! Run reports: `key: value` lines or one JSON object.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("representation rejected: {0}")]
    Rejected(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Rejected(_) => 4,
            CliError::Capacity(_) => 5,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io-error",
            CliError::Parse(_) => "parse-error",
            CliError::Validation(_) => "validation-failed",
            CliError::Rejected(_) => "rejected",
            CliError::Capacity(_) => "capacity-exceeded",
        }
    }
}

/// Primary output of a command: a diagram, presentation or SVG document.
pub struct Artifact {
    pub text: String,
    pub out: Option<PathBuf>,
}

pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub results: Map<String, Value>,
    pub artifact: Option<Artifact>,
    /// Set when results were produced but a bound was hit.
    pub capacity: Option<String>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report { command, inputs: Vec::new(), results: Map::new(), artifact: None, capacity: None }
    }

    pub fn read_input(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push((path.display().to_string(), format!("{:x}", Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|_| CliError::Parse(format!("{} is not UTF-8", path.display())))
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    /// Writes the report and artifact; returns the exit code.
    pub fn emit(self, format: Format, error: Option<&CliError>) -> u8 {
        let code = match (error, &self.capacity) {
            (Some(e), _) => e.exit_code(),
            (None, Some(_)) => 5,
            (None, None) => 0,
        };
        let status = match (error, &self.capacity) {
            (Some(e), _) => e.status(),
            (None, Some(_)) => "capacity-exceeded",
            (None, None) => "ok",
        };
        let mut artifact_inline = None;
        if let Some(a) = &self.artifact {
            match &a.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &a.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
                None => artifact_inline = Some(a.text.clone()),
            }
        }
        match format {
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("command".into(), json!(self.command));
                obj.insert(
                    "inputs".into(),
                    Value::Array(self.inputs.iter().map(|(p, d)| json!({ "path": p, "sha256": d })).collect()),
                );
                obj.insert("status".into(), json!(status));
                obj.insert("exit_code".into(), json!(code));
                if let Some(e) = error {
                    obj.insert("error".into(), json!(e.to_string()));
                }
                if let Some(c) = &self.capacity {
                    obj.insert("capacity".into(), json!(c));
                }
                obj.insert("results".into(), Value::Object(self.results));
                if let Some(a) = artifact_inline {
                    obj.insert("artifact".into(), json!(a));
                }
                println!("{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable"));
            }
            Format::Text => {
                let mut lines = vec![format!("command: {}", self.command)];
                for (p, d) in &self.inputs {
                    lines.push(format!("input: {p} sha256:{d}"));
                }
                lines.push(format!("status: {status}"));
                if let Some(e) = error {
                    lines.push(format!("error: {e}"));
                }
                if let Some(c) = &self.capacity {
                    lines.push(format!("capacity: {c}"));
                }
                for (k, v) in &self.results {
                    push_value(&mut lines, k, v);
                }
                let report = lines.join("\n");
                // with the artifact on stdout the report moves to stderr
                match artifact_inline {
                    Some(a) => {
                        print!("{a}");
                        eprintln!("{report}");
                    }
                    None => println!("{report}"),
                }
            }
        }
        code
    }
}

fn push_value(lines: &mut Vec<String>, key: &str, v: &Value) {
    match v {
        Value::String(s) => lines.push(format!("{key}: {s}")),
        Value::Array(items) if items.iter().all(|i| i.is_string()) => {
            if items.is_empty() {
                lines.push(format!("{key}: (none)"));
            }
            for i in items {
                lines.push(format!("{key}: {}", i.as_str().expect("string item")));
            }
        }
        other => lines.push(format!("{key}: {other}")),
    }
}
