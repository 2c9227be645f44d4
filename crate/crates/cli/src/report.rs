//! Run reports: one JSON document or a plain-text table per command.

use std::fmt::Write as _;

use lastsuccess::{InstanceFile, NumericMode};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub instance_digest: String,
    pub mode: NumericMode,
    pub results: Value,
    pub version: String,
    /// The instance that was solved, so the report can be fed back via `--input`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
}

/// SHA-256 of the canonical JSON form of an instance.
pub fn instance_digest(inst: &InstanceFile) -> String {
    digest_text(&inst.to_json())
}

pub fn digest_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_table(&self) -> String {
        let mut lines = vec![
            ("command".to_string(), self.command.clone()),
            ("mode".to_string(), self.mode.to_string()),
            ("instance_digest".to_string(), self.instance_digest.clone()),
        ];
        if let Value::Object(map) = &self.results {
            for (key, value) in map {
                collect_fields(&mut lines, key, value);
            }
        }
        let width = lines.iter().filter(|(_, v)| !v.starts_with('\n')).map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (key, value) in lines {
            match value.strip_prefix('\n') {
                Some(block) => {
                    let _ = writeln!(out, "{key}:");
                    out.push_str(block);
                }
                None => {
                    let _ = writeln!(out, "{key:<width$}  {value}");
                }
            }
        }
        out
    }
}

/// Flattens one result field into `(key, text)` lines. Arrays of rows become a
/// block whose text starts with a newline and is printed under its key.
fn collect_fields(lines: &mut Vec<(String, String)>, key: &str, value: &Value) {
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_object()) => {
            let joined: Vec<String> = items.iter().map(scalar_text).collect();
            lines.push((key.to_string(), joined.join(" ")));
        }
        Value::Array(rows) => {
            let mut block = String::from("\n");
            for row in rows {
                if let Value::Object(map) = row {
                    let cells: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", scalar_text(v))).collect();
                    let _ = writeln!(block, "  {}", cells.join("  "));
                }
            }
            lines.push((key.to_string(), block));
        }
        Value::Object(map) => {
            for (k, v) in map {
                collect_fields(lines, &format!("{key}.{k}"), v);
            }
        }
        other => lines.push((key.to_string(), scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}
