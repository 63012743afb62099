//! Reading raw corpora from JSONL and CSV files.
//!
//! Malformed records never abort a read and are never dropped silently:
//! each one is reported as a [`Reject`] carrying its 1-based line number.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use textnet_core::RawDocument;

use crate::error::{Error, Result};
use crate::fsutil::create_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Jsonl => "jsonl",
            InputFormat::Csv => "csv",
        }
    }

    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "jsonl" | "ndjson" | "json" => Some(InputFormat::Jsonl),
            "csv" => Some(InputFormat::Csv),
            _ => None,
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(InputFormat::Jsonl),
            "csv" => Ok(InputFormat::Csv),
            other => Err(format!(
                "unknown input format `{other}` (expected jsonl or csv)"
            )),
        }
    }
}

/// A record that could not be turned into a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Default)]
pub struct Ingested {
    pub documents: Vec<RawDocument>,
    pub rejects: Vec<Reject>,
}

impl Ingested {
    fn accept(
        &mut self,
        seen: &mut HashSet<String>,
        line: u64,
        doc: std::result::Result<RawDocument, &str>,
    ) {
        let reject = |reason: &str| Reject {
            line,
            reason: reason.to_string(),
        };
        match doc {
            Err(reason) => self.rejects.push(reject(reason)),
            Ok(doc) if doc.id.is_empty() => self.rejects.push(reject("missing-id")),
            Ok(doc) if doc.text.trim().is_empty() => self.rejects.push(reject("empty-text")),
            Ok(doc) if !seen.insert(doc.id.clone()) => self.rejects.push(reject("duplicate-id")),
            Ok(doc) => self.documents.push(doc),
        }
    }
}

pub fn read_corpus(path: &Path, format: InputFormat) -> Result<Ingested> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    match format {
        InputFormat::Jsonl => read_jsonl(path, BufReader::new(file)),
        InputFormat::Csv => read_csv(path, file),
    }
}

fn read_jsonl(path: &Path, mut reader: impl BufRead) -> Result<Ingested> {
    let mut out = Ingested::default();
    let mut seen = HashSet::new();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let Ok(line) = std::str::from_utf8(&buf) else {
            out.accept(&mut seen, line_no, Err("invalid-utf8"));
            continue;
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.accept(&mut seen, line_no, parse_json_record(line));
    }
    Ok(out)
}

fn parse_json_record(line: &str) -> std::result::Result<RawDocument, &'static str> {
    let value: Value = serde_json::from_str(line).map_err(|_| "malformed-json")?;
    let obj = value.as_object().ok_or("malformed-json")?;
    let id = match obj.get("id") {
        Some(Value::String(s)) => s.clone(),
        None | Some(Value::Null) => return Err("missing-id"),
        Some(_) => return Err("invalid-id"),
    };
    let text = match obj.get("text") {
        Some(Value::String(s)) => s.clone(),
        None | Some(Value::Null) => return Err("missing-text"),
        Some(_) => return Err("invalid-text"),
    };
    let created_at = match obj.get("created_at") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err("invalid-created_at"),
    };
    let tags = match obj.get("tags") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|t| t.as_str().map(String::from))
            .collect::<Option<Vec<_>>>()
            .ok_or("invalid-tags")?,
        Some(_) => return Err("invalid-tags"),
    };
    Ok(RawDocument {
        id,
        text,
        created_at,
        tags,
    })
}

fn read_csv(path: &Path, file: File) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::data(path, format!("unreadable CSV header: {e}")))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(id_col), Some(text_col)) = (column("id"), column("text")) else {
        return Err(Error::data(
            path,
            "CSV header must name `id` and `text` columns",
        ));
    };
    let created_col = column("created_at");
    let tags_col = column("tags");

    let mut out = Ingested::default();
    let mut seen = HashSet::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line() + 1;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line());
                let field = |i: usize| record.get(i).unwrap_or_default();
                let doc = RawDocument {
                    id: field(id_col).to_string(),
                    text: field(text_col).to_string(),
                    created_at: created_col
                        .map(field)
                        .filter(|s| !s.is_empty())
                        .map(String::from),
                    tags: tags_col
                        .map(field)
                        .map(|s| {
                            s.split(';')
                                .map(str::trim)
                                .filter(|t| !t.is_empty())
                                .map(String::from)
                                .collect()
                        })
                        .unwrap_or_default(),
                };
                out.accept(&mut seen, line, Ok(doc));
            }
            Err(e) => {
                let line = e.position().map_or(line, |p| p.line());
                let reason = match e.kind() {
                    csv::ErrorKind::Utf8 { .. } => "invalid-utf8",
                    csv::ErrorKind::UnequalLengths { .. } => "malformed-csv",
                    csv::ErrorKind::Io(_) => {
                        return Err(Error::data(path, e));
                    }
                    _ => "malformed-csv",
                };
                out.accept(&mut seen, line, Err(reason));
            }
        }
    }
    Ok(out)
}

/// Writes documents as JSONL in the input schema.
pub fn write_corpus(path: &Path, docs: &[RawDocument]) -> Result<()> {
    write_jsonl(path, docs)
}

/// Reads a JSONL corpus written by [`write_corpus`]; any bad record is fatal.
pub fn read_clean_corpus(path: &Path) -> Result<Vec<RawDocument>> {
    read_jsonl_strict(path)
}

pub fn write_rejects(path: &Path, rejects: &[Reject]) -> Result<()> {
    write_jsonl(path, rejects)
}

pub(crate) fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = create_file(path)?;
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|e| Error::data(path, e))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn read_jsonl_strict<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut items = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .map_err(|e| Error::data(path, format!("line {}: {e}", i + 1)))?;
        items.push(item);
    }
    Ok(items)
}
