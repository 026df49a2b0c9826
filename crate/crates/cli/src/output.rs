//! CSV tables with a `#` metadata header, and JSON reports.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// Seventeen significant digits, so values round-trip exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table<W: Write> {
    out: W,
}

impl<W: Write> Table<W> {
    /// Writes the metadata lines and the column header.
    pub fn start<C: Serialize>(mut out: W, command: &str, config: &C, columns: &[String]) -> std::io::Result<Self> {
        writeln!(out, "# dce {command} {}", env!("CARGO_PKG_VERSION"))?;
        let json = serde_json::to_string(config).map_err(std::io::Error::other)?;
        writeln!(out, "# config: {json}")?;
        writeln!(out, "{}", columns.join(","))?;
        Ok(Self { out })
    }

    pub fn row(&mut self, fields: &[String]) -> std::io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }

    pub fn note(&mut self, key: &str, value: &str) -> std::io::Result<()> {
        writeln!(self.out, "# {key}: {value}")
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

/// Pretty JSON with the effective configuration embedded under `config`.
pub fn report<W: Write, C: Serialize>(mut out: W, command: &str, config: &C, body: Value) -> std::io::Result<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), Value::String(command.into()));
    doc.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    doc.insert(
        "config".into(),
        serde_json::to_value(config).map_err(std::io::Error::other)?,
    );
    if let Value::Object(map) = body {
        doc.extend(map);
    }
    let text = serde_json::to_string_pretty(&Value::Object(doc)).map_err(std::io::Error::other)?;
    writeln!(out, "{text}")?;
    out.flush()
}
