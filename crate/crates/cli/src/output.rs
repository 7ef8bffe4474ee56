use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path as FsPath;

use serde::Serialize;
use sigdev_core::paths::{read_csv, read_jsonl, NamedPath};
use sigdev_core::{Error, Path, Result};

use crate::{CommonArgs, Format};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn is_jsonl(file: &FsPath) -> bool {
    matches!(
        file.extension().and_then(|e| e.to_str()),
        Some("jsonl" | "json" | "ndjson")
    )
}

/// All paths of a file: every line of a JSONL file, or the single path of a CSV.
pub fn read_paths(file: &FsPath) -> Result<Vec<NamedPath>> {
    let f = File::open(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    let with_name = |e: Error| Error::Parse(format!("{}: {e}", file.display()));
    if is_jsonl(file) {
        read_jsonl(BufReader::new(f)).map_err(with_name)
    } else {
        let path = read_csv(f).map_err(with_name)?;
        let id = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Ok(vec![NamedPath { id, path }])
    }
}

pub fn read_single_path(file: &FsPath) -> Result<Path> {
    let mut all = read_paths(file)?;
    if all.len() != 1 {
        return Err(Error::Parse(format!(
            "{}: expected one path, found {}",
            file.display(),
            all.len()
        )));
    }
    Ok(all.remove(0).path)
}

/// Writes to --out, or standard output.
pub fn emit(common: &CommonArgs, bytes: &[u8]) -> Result<()> {
    match &common.out {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// A header plus rows of already formatted cells.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(csv_err)?;
                for r in &self.rows {
                    w.write_record(r).map_err(csv_err)?;
                }
                w.into_inner().map_err(|e| Error::Io(e.into_error()))
            }
            Format::Json => {
                let records: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        self.header
                            .iter()
                            .zip(r)
                            .map(|(h, cell)| (h.clone(), json_cell(cell)))
                            .collect()
                    })
                    .collect();
                to_json(&records)
            }
        }
    }
}

/// Numbers stay numbers in JSON, everything else is a string.
fn json_cell(cell: &str) -> serde_json::Value {
    if cell.is_empty() {
        return serde_json::Value::Null;
    }
    match cell.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
        Some(n) => serde_json::Value::Number(n),
        None => serde_json::Value::String(cell.to_string()),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| Error::Numeric(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
