use std::path::Path;

use serde_json::{json, Map, Value};

use crate::args::{Common, Format};

pub const SCHEMA: u32 = 1;

pub enum Status {
    Ok,
    Violated(String),
}

pub enum CliError {
    Clap(clap::Error),
    Usage(String),
    Invariant(String),
}

impl From<groupwalk_core::walk::WalkError> for CliError {
    fn from(e: groupwalk_core::walk::WalkError) -> Self {
        if e.is_invariant() {
            CliError::Invariant(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<groupwalk_core::group::GroupError> for CliError {
    fn from(e: groupwalk_core::group::GroupError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<groupwalk_core::trace::TraceError> for CliError {
    fn from(e: groupwalk_core::trace::TraceError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<groupwalk_core::sol::SolError> for CliError {
    fn from(e: groupwalk_core::sol::SolError) -> Self {
        if e.is_invariant() {
            CliError::Invariant(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Where and how a command writes, plus the provenance every artifact carries.
pub struct Ctx<'a> {
    pub command_line: &'a str,
    pub common: &'a Common,
    pub format: Format,
}

impl<'a> Ctx<'a> {
    pub fn new(command_line: &'a str, common: &'a Common, default: Format) -> Self {
        Ctx { command_line, common, format: common.format.unwrap_or(default) }
    }

    /// `schema`, `command` and `seed`, followed by `extra`.
    pub fn header(&self, extra: Value) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command_line));
        m.insert("seed".into(), json!(self.common.seed));
        if let Value::Object(extra) = extra {
            m.extend(extra);
        }
        Value::Object(m)
    }

    pub fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.common.out {
            Some(path) => write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Writes `header ∪ body` as JSON, or as `field,value` rows of the
    /// top-level scalars under a `#` header line for CSV.
    pub fn emit_report(&self, header: Value, body: Value) -> Result<(), CliError> {
        let mut doc = header.clone();
        if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
            d.extend(b);
        }
        match self.format {
            Format::Json => self.write(&(serde_json::to_string_pretty(&doc).unwrap() + "\n")),
            Format::Csv => {
                let mut out = format!("# {header}\nfield,value\n");
                if let Value::Object(d) = &doc {
                    for (k, v) in d {
                        if header.get(k).is_some() {
                            continue;
                        }
                        match v {
                            Value::Array(_) | Value::Object(_) => {}
                            Value::String(s) => out.push_str(&format!("{k},{s}\n")),
                            other => out.push_str(&format!("{k},{other}\n")),
                        }
                    }
                }
                self.write(&out)
            }
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
