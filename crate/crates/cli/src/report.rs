use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use mvtop_core::Error;

/// Outcome classes, one per exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    Error,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Error => 2,
            Status::Unknown => 3,
        }
    }

    pub fn of(b: bool) -> Status {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetUsage {
    pub limit: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explored: Option<usize>,
    pub exhausted: bool,
}

/// Everything a command prints. No field depends on the clock, the
/// filesystem location of inputs, or the number of worker threads.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub inputs_digest: String,
    pub status: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetUsage>,
}

/// sha256 over the canonical JSON of the parsed inputs and of the options
/// that influence the result.
pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("values serialize");
    let hash = Sha256::digest(&bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Io { path, message } => {
                json!({"kind": "Io", "path": path, "message": message})
            }
            CliError::Schema { path, message } => {
                json!({"kind": "Schema", "path": path, "message": message})
            }
            CliError::Core(e) => {
                let mut out = json!({"kind": kind(e), "message": e.to_string()});
                match e {
                    Error::NotPathConnected { from, to } => {
                        out["from"] = json!(from);
                        out["to"] = json!(to);
                    }
                    Error::NotTransitive { outer, inner } => {
                        out["outer"] = json!(outer);
                        out["inner"] = json!(inner);
                    }
                    _ => {}
                }
                out
            }
        }
    }
}

/// Variant name of an error.
fn kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_owned()
}
