//! Report rendering: aligned text for people, newline-delimited JSON for
//! pipes. Every record carries a `kind` tag in machine mode.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Ndjson,
}

pub struct Emitter<W: Write> {
    format: Format,
    out: W,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Emitter { format, out }
    }

    /// Emit one record. `text` is only rendered in text mode.
    pub fn record<T, F>(&mut self, kind: &str, value: &T, text: F) -> io::Result<()>
    where
        T: Serialize + ?Sized,
        F: FnOnce() -> String,
    {
        match self.format {
            Format::Text => {
                let s = text();
                if !s.is_empty() {
                    writeln!(self.out, "{s}")?;
                }
                Ok(())
            }
            Format::Ndjson => {
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::String(kind.into()));
                match serde_json::to_value(value).map_err(io::Error::other)? {
                    Value::Object(m) => obj.extend(m),
                    other => {
                        obj.insert("value".into(), other);
                    }
                }
                serde_json::to_writer(&mut self.out, &Value::Object(obj))
                    .map_err(io::Error::other)?;
                writeln!(self.out)
            }
        }
    }

    /// A line that only appears in text mode.
    pub fn text(&mut self, line: impl AsRef<str>) -> io::Result<()> {
        if self.format == Format::Text {
            writeln!(self.out, "{}", line.as_ref())?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Left-aligned columns padded to the widest cell.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(
        rows.iter()
            .map(|r| line(r.iter().map(String::as_str).collect())),
    );
    out.join("\n")
}
