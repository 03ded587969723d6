//! JSON-lines and CSV emission with floats rounded to 12 significant digits.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};
use smoothpoly::acceptance::sig12;

use crate::{CliError, Format};

/// Rounds every float in `v` to 12 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let f = n.as_f64().unwrap();
            serde_json::Number::from_f64(sig12(f).parse().unwrap()).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(t: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(t).map_err(anyhow::Error::from)?)
}

/// Nested objects become dotted column names; arrays are kept as JSON text.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Collects records and writes them in the chosen format.
pub struct Sink {
    format: Format,
    header: Option<Vec<String>>,
    buf: Vec<u8>,
}

impl Sink {
    pub fn new(format: Format) -> Self {
        Sink { format, header: None, buf: Vec::new() }
    }

    /// One record: a JSON line, or a CSV row under a header taken from the first record.
    pub fn record(&mut self, v: &Value) -> Result<(), CliError> {
        let v = &round_floats(v.clone());
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut self.buf, v).map_err(anyhow::Error::from)?;
                self.buf.push(b'\n');
            }
            Format::Csv => {
                let mut cols = Vec::new();
                flatten("", v, &mut cols);
                let names: Vec<String> = cols.iter().map(|c| c.0.clone()).collect();
                match &self.header {
                    None => {
                        writeln!(self.buf, "{}", names.iter().map(|n| csv_field(n)).collect::<Vec<_>>().join(","))?;
                        self.header = Some(names);
                    }
                    Some(h) if *h != names => {
                        // A differently shaped record starts a new table.
                        writeln!(self.buf)?;
                        writeln!(self.buf, "{}", names.iter().map(|n| csv_field(n)).collect::<Vec<_>>().join(","))?;
                        self.header = Some(names);
                    }
                    Some(_) => {}
                }
                writeln!(self.buf, "{}", cols.iter().map(|c| csv_field(&c.1)).collect::<Vec<_>>().join(","))?;
            }
        }
        Ok(())
    }

    pub fn finish(self, out: Option<&std::path::Path>) -> Result<(), CliError> {
        match out {
            Some(p) => std::fs::write(p, &self.buf)?,
            None => std::io::stdout().write_all(&self.buf)?,
        }
        Ok(())
    }
}

/// Wraps a result with the command name, library version and resolved configuration.
pub fn envelope(command: &str, config: &Value, result: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.into()));
    m.insert("version".into(), Value::String(smoothpoly::VERSION.into()));
    m.insert("config".into(), config.clone());
    m.insert("result".into(), result);
    Value::Object(m)
}
