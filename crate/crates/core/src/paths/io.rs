//! Path file formats.
//!
//! * CSV, one path per file: header `t,x1,...,xd`, one row per sample.
//! * JSON Lines, one path per line: `{"id": ..., "t": [...], "x": [[...], ...]}`.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use super::Path;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedPath {
    pub id: String,
    pub path: Path,
}

#[derive(Serialize, Deserialize)]
struct PathRecord {
    id: String,
    t: Vec<f64>,
    x: Vec<Vec<f64>>,
}

pub fn write_csv<W: Write>(path: &Path, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=path.dim()).map(|k| format!("x{k}")));
    w.write_record(&header).map_err(csv_err)?;
    for (k, &t) in path.times().iter().enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(path.point(k).iter().map(f64::to_string));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Path> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    let dim = header.len().saturating_sub(1);
    if header.get(0) != Some("t") || dim == 0 {
        return Err(Error::Parse("CSV header must be t,x1,...,xd".into()));
    }
    for (k, name) in header.iter().skip(1).enumerate() {
        if name != format!("x{}", k + 1) {
            return Err(Error::Parse(format!("unexpected column `{name}`")));
        }
    }
    let mut times = Vec::new();
    let mut points = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.len() != dim + 1 {
            return Err(Error::Parse(format!("row {} has {} fields", line + 2, record.len())));
        }
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad number `{field}`", line + 2)))?;
            if k == 0 {
                times.push(v);
            } else {
                points.push(v);
            }
        }
    }
    Path::from_flat(times, points, dim)
}

pub fn write_jsonl<W: Write>(paths: &[NamedPath], mut out: W) -> Result<()> {
    for named in paths {
        let record = PathRecord {
            id: named.id.clone(),
            t: named.path.times().to_vec(),
            x: named.path.points().map(<[f64]>::to_vec).collect(),
        };
        serde_json::to_writer(&mut out, &record).map_err(|e| Error::Parse(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<NamedPath>> {
    let mut paths = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PathRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        let path = Path::new(record.t, record.x)?;
        if let Some(first) = paths.first().map(|p: &NamedPath| p.path.dim()) {
            if first != path.dim() {
                return Err(Error::Parse(format!("line {}: dimension mismatch", n + 1)));
            }
        }
        paths.push(NamedPath { id: record.id, path });
    }
    Ok(paths)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
