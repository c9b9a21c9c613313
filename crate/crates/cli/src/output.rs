use std::fs;
use std::io::Write;
use std::path::Path;

use metahecke::ffield::DEFAULT_MAX_Q;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_Q_VAR: &str = "METAHECKE_MAX_Q";

#[derive(Debug, Error)]
pub enum CliError {
    /// The request was understood but the computation refused it.
    #[error("{message}")]
    Domain { kind: &'static str, message: String },
    /// The request itself is malformed.
    #[error("{0}")]
    Input(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain { .. } => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Domain { kind, .. } => kind,
            CliError::Input(_) => "input",
            CliError::Io(_) => "io",
        }
    }
}

macro_rules! domain_from {
    ($($ty:path => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Domain { kind: $kind, message: e.to_string() }
            }
        })*
    };
}

domain_from! {
    metahecke::FieldError => "field",
    metahecke::HilbertError => "hilbert",
    metahecke::CocycleError => "cocycle",
    metahecke::weyl::WeylError => "weyl",
    metahecke::hecke::HeckeError => "hecke",
    metahecke::typeparams::TypeError => "typeparams",
    metahecke::hmodules::ModuleError => "module",
    metahecke::scalar::ScalarError => "scalar",
}

pub fn domain(kind: &'static str, message: impl Into<String>) -> CliError {
    CliError::Domain {
        kind,
        message: message.into(),
    }
}

/// Field-size cap from the environment, defaulting to the library bound.
pub fn max_q() -> Result<u32, CliError> {
    match std::env::var(MAX_Q_VAR) {
        Err(_) => Ok(DEFAULT_MAX_Q),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(q) if q >= 2 => Ok(q),
            _ => Err(CliError::Input(format!(
                "{MAX_Q_VAR} must be an integer >= 2, got {s:?}"
            ))),
        },
    }
}

/// Every document starts with the same header; the result's fields follow.
pub fn envelope<I: Serialize, R: Serialize>(
    command: &str,
    seed: u64,
    input: &I,
    result: &R,
) -> Result<Value, CliError> {
    let mut doc = Map::new();
    doc.insert("command".into(), command.into());
    doc.insert("version".into(), VERSION.into());
    doc.insert("seed".into(), seed.into());
    doc.insert("input".into(), to_value(input)?);
    match to_value(result)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    Ok(Value::Object(doc))
}

pub fn error_document(command: &str, err: &CliError) -> Value {
    serde_json::json!({
        "command": command,
        "version": VERSION,
        "error": { "kind": err.kind(), "message": err.to_string() },
    })
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Input(e.to_string()))
}

pub fn emit(doc: &Value, compact: bool, output: Option<&Path>) -> Result<(), CliError> {
    let mut text = if compact {
        serde_json::to_string(doc)
    } else {
        serde_json::to_string_pretty(doc)
    }
    .expect("JSON values always serialize");
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
