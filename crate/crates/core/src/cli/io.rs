//! Matrix files. CSV holds one matrix row per line with decimal or `p/q`
//! tokens; JSON is `{"rows": d, "cols": m, "data": [[...], ...]}` with numbers
//! or token strings. Any `p/q` token switches the whole matrix to exact mode.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, RationalMatrix, RealMatrix};
use crate::scalar::{parse_rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// JSON for a `.json` extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Clone, Debug)]
pub enum LoadedMatrix {
    Real(RealMatrix),
    Exact(RationalMatrix),
}

impl LoadedMatrix {
    pub fn rows(&self) -> usize {
        match self {
            LoadedMatrix::Real(b) => b.rows(),
            LoadedMatrix::Exact(b) => b.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            LoadedMatrix::Real(b) => b.cols(),
            LoadedMatrix::Exact(b) => b.cols(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LoadedMatrix::Exact(_))
    }
}

pub fn read_matrix(path: &Path, exact: bool) -> Result<LoadedMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, Format::from_path(path), exact)
}

pub fn parse_matrix(text: &str, format: Format, exact: bool) -> Result<LoadedMatrix> {
    let tokens = match format {
        Format::Csv => csv_tokens(text)?,
        Format::Json => json_tokens(text)?,
    };
    build(tokens, exact)
}

fn csv_tokens(text: &str) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("csv: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(record.iter().map(str::to_owned).collect());
    }
    Ok(rows)
}

fn json_tokens(text: &str) -> Result<Vec<Vec<String>>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("json: {e}")))?;
    let dim = |key: &str| {
        doc.get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse(format!("json: missing or invalid \"{key}\"")))
    };
    let (rows, cols) = (dim("rows")? as usize, dim("cols")? as usize);
    let data = doc
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("json: missing \"data\" array".into()))?;
    if data.len() != rows {
        return Err(Error::Parse(format!(
            "json: \"rows\" is {rows} but data has {} rows",
            data.len()
        )));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in data.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("json: row {i} is not an array")))?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "json: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        let tokens = row
            .iter()
            .enumerate()
            .map(|(j, v)| match v {
                Value::Number(n) => Ok(n.to_string()),
                Value::String(s) => Ok(s.clone()),
                _ => Err(Error::Parse(format!("json: entry ({i}, {j}) is not a number"))),
            })
            .collect::<Result<_>>()?;
        out.push(tokens);
    }
    Ok(out)
}

fn build(tokens: Vec<Vec<String>>, exact: bool) -> Result<LoadedMatrix> {
    if tokens.is_empty() {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    let cols = tokens[0].len();
    for (i, row) in tokens.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    let exact = exact || tokens.iter().flatten().any(|t| t.contains('/'));
    let bad = |i: usize, j: usize, t: &str| Error::Parse(format!("entry ({i}, {j}): cannot parse {t:?}"));
    if exact {
        let rows = tokens
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, t)| parse_rational(t).ok_or_else(|| bad(i, j, t)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(LoadedMatrix::Exact(Matrix::from_rows(rows)?));
    }
    let rows = tokens
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, t)| {
                    let v: f64 = t.parse().map_err(|_| bad(i, j, t))?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::NonFinite { row: i, col: j })
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadedMatrix::Real(Matrix::from_rows(rows)?))
}

/// Shortest round-trip decimal for floats, `p/q` for exact entries (even
/// integers, so that the file reads back in exact mode).
fn token<T: Scalar>(v: &T) -> String {
    if T::EXACT {
        let r = v.to_rational();
        format!("{}/{}", r.numer(), r.denom())
    } else {
        format!("{:?}", v.to_real())
    }
}

/// Deterministic text for `b`; parsing it back gives `b` exactly.
pub fn format_matrix<T: Scalar>(b: &Matrix<T>, format: Format) -> String {
    let rows = (0..b.rows()).map(|i| b.row(i).iter().map(token).collect::<Vec<_>>());
    match format {
        Format::Csv => rows.map(|r| r.join(",") + "\n").collect(),
        Format::Json => {
            let data: Vec<Vec<Value>> = rows
                .map(|r| {
                    r.into_iter()
                        .map(|t| {
                            if T::EXACT {
                                Value::String(t)
                            } else {
                                json!(t.parse::<f64>().unwrap_or(f64::NAN))
                            }
                        })
                        .collect()
                })
                .collect();
            let doc = json!({ "rows": b.rows(), "cols": b.cols(), "data": data });
            serde_json::to_string_pretty(&doc).expect("matrix serializes") + "\n"
        }
    }
}
