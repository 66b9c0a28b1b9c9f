//! Rendering and atomic delivery of command output.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use hyperinfo::io::fmt_f64;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A CSV table built row by row. Fields are numbers or plain identifiers,
/// so no quoting is needed.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { text: header.join(",") + "\n" }
    }

    pub fn row(&mut self, fields: &[Field]) {
        let line: Vec<String> = fields.iter().map(Field::render).collect();
        let _ = writeln!(self.text, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub enum Field<'a> {
    Num(f64),
    Int(u64),
    Text(&'a str),
    Missing,
}

impl Field<'_> {
    fn render(&self) -> String {
        match self {
            Field::Num(x) if x.is_finite() => fmt_f64(*x),
            Field::Num(_) | Field::Missing => String::new(),
            Field::Int(i) => i.to_string(),
            Field::Text(s) => (*s).to_string(),
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// Writes to `path` through a temporary sibling and a rename, or to stdout
/// when no path is given. A failed write leaves nothing at `path`.
pub fn deliver(text: &str, path: Option<&Path>) -> io::Result<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        return out.flush();
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
