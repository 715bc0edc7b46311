//! Report rendering and the exit-code contract.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "hgforge/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Rejected,
    Degenerate,
}

impl Status {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Self::Success
        } else {
            Self::Rejected
        }
    }

    fn code(self) -> u8 {
        match self {
            Self::Success => 0,
            Self::Rejected => 1,
            Self::Degenerate => 3,
        }
    }
}

/// A finished command: its status, a human report and a JSON report body.
/// `stdout_payload`, when set, replaces the text report on stdout and the
/// text report moves to stderr.
pub struct Outcome {
    pub status: Status,
    pub text: String,
    pub json: Map<String, Value>,
    pub stdout_payload: Option<String>,
}

/// Input error: unreadable file, malformed document or bad argument.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

fn envelope(command: &str, body: Map<String, Value>) -> Value {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(command));
    doc.extend(body);
    Value::Object(doc)
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

/// Prints the outcome and returns the process exit code.
pub fn emit(command: &str, format: Format, result: Result<Outcome, InputError>) -> u8 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    match result {
        Ok(outcome) => {
            // Write failures (a closed pipe) do not change the exit code.
            let _ = match format {
                Format::Text => match &outcome.stdout_payload {
                    Some(payload) => write!(out, "{payload}").and_then(|_| write!(err, "{}", outcome.text)),
                    None => write!(out, "{}", outcome.text),
                },
                Format::Json => writeln!(out, "{}", pretty(&envelope(command, outcome.json))),
            };
            outcome.status.code()
        }
        Err(InputError(message)) => {
            let _ = writeln!(err, "error: {message}");
            if format == Format::Json {
                let mut body = Map::new();
                body.insert("error".into(), json!(message));
                let _ = writeln!(out, "{}", pretty(&envelope(command, body)));
            }
            2
        }
    }
}
