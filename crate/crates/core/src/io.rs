//! CSV ingestion and canonical JSON reports.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Result, StatError};

fn ingest(row: usize, column: &str, message: String) -> StatError {
    StatError::Ingestion {
        row,
        column: column.to_string(),
        message,
    }
}

/// Numeric columns read from a CSV file with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn from_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| StatError::Io(format!("{}: {e}", path.display())))?;
        Self::from_reader(f)
    }

    /// Parses RFC 4180 CSV. Rows are numbered from 1 with the header as row 1.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let names: Vec<String> = rdr
            .headers()
            .map_err(|e| ingest(1, "*", e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if names.is_empty() || names.iter().all(|s| s.is_empty()) {
            return Err(ingest(1, "*", "empty file or missing header".into()));
        }
        let mut columns = vec![Vec::new(); names.len()];
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let rec = rec.map_err(|e| ingest(row, "*", e.to_string()))?;
            if rec.len() != names.len() {
                let col = if rec.len() < names.len() { names[rec.len()].as_str() } else { "*" };
                return Err(ingest(row, col, format!("expected {} fields, got {}", names.len(), rec.len())));
            }
            for (j, cell) in rec.iter().enumerate() {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| ingest(row, &names[j], format!("`{cell}` is not a number")))?;
                if v.is_nan() {
                    return Err(ingest(row, &names[j], "NaN cells are not accepted".into()));
                }
                columns[j].push(v);
            }
        }
        if columns[0].is_empty() {
            return Err(ingest(2, "*", "no data rows".into()));
        }
        Ok(Self { names, columns })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nrows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn ncols(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|j| self.columns[j].as_slice())
            .ok_or_else(|| StatError::Usage(format!("no column named `{name}` (have: {})", self.names.join(", "))))
    }

    pub fn column_at(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    /// Rows restricted to the named columns.
    pub fn rows(&self, names: &[&str]) -> Result<Vec<Vec<f64>>> {
        let cols = names.iter().map(|n| self.column(n)).collect::<Result<Vec<_>>>()?;
        Ok((0..self.nrows()).map(|i| cols.iter().map(|c| c[i]).collect()).collect())
    }
}

/// Formats a float with 17 significant digits, e.g. `8.7264711069869958e-1`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical text of a JSON value: sorted keys, two-space indent, floats at
/// 17 significant digits. Parsing the output and rendering it again yields
/// the same bytes.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| {
        for _ in 0..d {
            out.push_str("  ");
        }
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serialization")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(depth + 1, out);
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&serde_json::to_string(k).expect("string serialization"));
                out.push_str(": ");
                write_value(&map[k.as_str()], depth + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
    }
}

/// Hex SHA-256 of the canonical form of `config`.
pub fn config_hash(config: &Value) -> String {
    let digest = Sha256::digest(canonical_json(config).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Wraps a result with artifact name, crate version, config hash and seed.
pub fn report<T: Serialize>(artifact: &str, config: &Value, seed: u64, result: &T) -> Result<String> {
    let env = serde_json::json!({
        "artifact": artifact,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "result": serde_json::to_value(result)?,
    });
    Ok(canonical_json(&env))
}

/// Writes CSV with a header from column names and rows of numbers.
pub fn numeric_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_comma_header() {
        let t = Table::from_reader("\"score, final\",x\n1,2\n3,4\n".as_bytes()).unwrap();
        assert_eq!(t.names()[0], "score, final");
        assert_eq!(t.column("x").unwrap(), &[2.0, 4.0]);
    }

    #[test]
    fn errors_name_row_and_column() {
        match Table::from_reader("a,b\n1,2\n3,oops\n".as_bytes()) {
            Err(StatError::Ingestion { row, column, .. }) => assert_eq!((row, column.as_str()), (3, "b")),
            other => panic!("{other:?}"),
        }
        match Table::from_reader("a,b\n1\n".as_bytes()) {
            Err(StatError::Ingestion { row, column, .. }) => assert_eq!((row, column.as_str()), (2, "b")),
            other => panic!("{other:?}"),
        }
        assert!(Table::from_reader("".as_bytes()).is_err());
        assert!(Table::from_reader("a,b\n1,NaN\n".as_bytes()).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let v = serde_json::json!({"b": [0.1, 2.0, -3e-300], "a": {"z": 1, "y": null, "x": "q\"s"}});
        let s = canonical_json(&v);
        let again = canonical_json(&serde_json::from_str(&s).unwrap());
        assert_eq!(s, again);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
