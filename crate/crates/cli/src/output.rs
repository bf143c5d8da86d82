use std::fs;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Format, Global};
use crate::error::CliError;

pub const SCHEMA: u32 = 1;

/// Rendered command output and whether some checked claim failed.
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

/// A JSON document stamped with the schema version and the command name.
pub fn document(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// `key: value` lines for the top-level fields, nested values inline as JSON.
pub fn plain(doc: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    out
}

/// Renders a document in json or plain; other formats are rejected.
pub fn render(doc: &Value, format: Format, failed: bool) -> Result<Outcome, CliError> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
        Format::Plain => plain(doc),
        other => {
            return Err(CliError::Usage(format!(
                "format {other:?} is not available for this command"
            )))
        }
    };
    Ok(Outcome { text, failed })
}

pub fn write(global: &Global, text: &str) -> Result<(), CliError> {
    match &global.output {
        Some(path) => fs::write(path, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(())
}
