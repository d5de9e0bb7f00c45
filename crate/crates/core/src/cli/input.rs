//! Input files: dense JSON matrices, CSV matrices and tropical rate tables.
//!
//! Vertex labels in files are one-based; everything returned here is
//! zero-based.

use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::{CliError, Mode};
use crate::matrix::AdjacencyMatrix;
use crate::scalar::{format_rational, parse_rational, rational_to_f64};
use crate::tropical::{ExpRate, ExponentialMarkovInput};

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedInput {
    Exact(AdjacencyMatrix<BigRational>),
    Float(AdjacencyMatrix<f64>),
    Tropical(ExponentialMarkovInput),
}

impl ParsedInput {
    pub fn n(&self) -> usize {
        match self {
            Self::Exact(g) => g.n(),
            Self::Float(g) => g.n(),
            Self::Tropical(inp) => inp.n(),
        }
    }

    /// The input in a form that parses back to an identical value.
    pub fn echo(&self) -> Value {
        match self {
            Self::Exact(g) => json!({
                "n": g.n(),
                "entries": g.rows().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            Self::Float(g) => json!({
                "n": g.n(),
                "entries": g.rows().map(|r| r.iter().map(|x| json!(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            Self::Tropical(inp) => {
                let arcs: Vec<Value> = inp
                    .rates()
                    .map(|((i, j), r)| tropical_arc(i, json!(j + 1), r))
                    .chain(inp.killings().map(|(i, r)| tropical_arc(i, json!("dagger"), r)))
                    .collect();
                json!({ "n": inp.n(), "arcs": arcs })
            }
        }
    }
}

fn tropical_arc(from: usize, to: Value, rate: &ExpRate) -> Value {
    json!({
        "from": from + 1,
        "to": to,
        "V": format_rational(&rate.order),
        "m": format_rational(&rate.prefactor),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` files are CSV, everything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Json,
        }
    }
}

pub fn parse_matrix_file(path: &Path, mode: Mode) -> Result<ParsedInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("IoError", format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text, Format::from_path(path), mode)
}

pub fn parse_input(text: &str, format: Format, mode: Mode) -> Result<ParsedInput, CliError> {
    let parsed = match format {
        Format::Csv => parse_csv(text, mode)?,
        Format::Json => parse_json(text, mode)?,
    };
    match (&parsed, mode) {
        (ParsedInput::Tropical(_), Mode::Tropical) | (ParsedInput::Exact(_), Mode::Exact) => Ok(parsed),
        (ParsedInput::Float(_), Mode::Float) => Ok(parsed),
        (ParsedInput::Tropical(_), _) => Err(CliError::input(
            "InvalidArgument",
            "a rate table (\"arcs\") needs --mode tropical; exact and float modes take a matrix",
        )),
        (_, _) => Err(CliError::input(
            "InvalidArgument",
            "tropical mode takes a rate table {\"n\", \"arcs\"}, not a dense matrix",
        )),
    }
}

fn parse_error(message: impl std::fmt::Display, line: u64, column: u64) -> CliError {
    CliError::input("ParseError", format!("line {line}, column {column}: {message}")).at(line, column)
}

enum Cell {
    Exact(BigRational),
    Float(f64),
}

/// One entry, located at `where_` for error messages. JSON numbers and
/// strings are accepted; strings may be `p/q` rationals or decimals.
fn parse_cell(raw: &str, mode: Mode, where_: &str) -> Result<Cell, CliError> {
    let trimmed = raw.trim();
    match mode {
        Mode::Exact => match parse_rational(trimmed) {
            Some(q) => Ok(Cell::Exact(q)),
            None if trimmed.parse::<f64>().is_ok() => Err(CliError::input(
                "NonRationalInExactMode",
                format!("{where_}: {trimmed:?} is not a finite rational"),
            )),
            None => Err(CliError::input("ParseError", format!("{where_}: cannot read {trimmed:?} as a number"))),
        },
        _ => {
            let value = trimmed
                .parse::<f64>()
                .ok()
                .or_else(|| parse_rational(trimmed).map(|q| rational_to_f64(&q)))
                .ok_or_else(|| CliError::input("ParseError", format!("{where_}: cannot read {trimmed:?} as a number")))?;
            if !value.is_finite() {
                return Err(CliError::input("ParseError", format!("{where_}: {trimmed:?} is not finite")));
            }
            Ok(Cell::Float(value))
        }
    }
}

fn assemble(cells: Vec<Vec<Cell>>, mode: Mode) -> Result<ParsedInput, CliError> {
    let n = cells.len();
    if n == 0 {
        return Err(CliError::input("DimensionMismatch", "matrix has no rows"));
    }
    for (i, row) in cells.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::input(
                "DimensionMismatch",
                format!("row {} has {} entries, expected {n} for a square matrix", i + 1, row.len()),
            ));
        }
    }
    let unwrap_exact = |c: Cell| match c {
        Cell::Exact(q) => q,
        Cell::Float(_) => unreachable!("cells share one mode"),
    };
    let unwrap_float = |c: Cell| match c {
        Cell::Float(x) => x,
        Cell::Exact(_) => unreachable!("cells share one mode"),
    };
    let result = match mode {
        Mode::Exact => AdjacencyMatrix::from_rows(
            cells.into_iter().map(|r| r.into_iter().map(unwrap_exact).collect()).collect(),
        )
        .map(ParsedInput::Exact),
        _ => AdjacencyMatrix::from_rows(
            cells.into_iter().map(|r| r.into_iter().map(unwrap_float).collect()).collect(),
        )
        .map(ParsedInput::Float),
    };
    result.map_err(CliError::from)
}

fn parse_csv(text: &str, mode: Mode) -> Result<ParsedInput, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(e, line, 1)
        })?;
        let line = record.position().map_or(rows.len() as u64 + 1, |p| p.line());
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                parse_cell(field, mode, &format!("line {line}, column {}", col + 1)).map_err(|e| e.at(line, col as u64 + 1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let mode = if mode == Mode::Tropical { Mode::Float } else { mode };
    assemble(rows, mode)
}

fn parse_json(text: &str, mode: Mode) -> Result<ParsedInput, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(&e, e.line() as u64, e.column() as u64))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::input("ParseError", "top level must be an object with \"n\" and \"entries\" or \"arcs\""))?;
    let n = obj
        .get("n")
        .map(|v| v.as_u64().ok_or_else(|| CliError::input("ParseError", "\"n\" must be a nonnegative integer")))
        .transpose()?
        .map(|n| n as usize);
    if let Some(arcs) = obj.get("arcs") {
        let n = n.ok_or_else(|| CliError::input("ParseError", "a rate table needs \"n\""))?;
        return parse_tropical(n, arcs).map(ParsedInput::Tropical);
    }
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("ParseError", "expected an \"entries\" array of rows or an \"arcs\" array"))?;
    let cell_mode = if mode == Mode::Tropical { Mode::Float } else { mode };
    let rows = entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| CliError::input("ParseError", format!("entries[{i}] must be an array")))?;
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    let at = format!("entries[{i}][{j}]");
                    match v {
                        Value::Number(num) => parse_cell(&num.to_string(), cell_mode, &at),
                        Value::String(s) => parse_cell(s, cell_mode, &at),
                        _ => Err(CliError::input("ParseError", format!("{at}: expected a number or a \"p/q\" string"))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(n) = n {
        if rows.len() != n {
            return Err(CliError::input(
                "DimensionMismatch",
                format!("\"n\" is {n} but \"entries\" has {} rows", rows.len()),
            ));
        }
    }
    let parsed = assemble(rows, cell_mode)?;
    Ok(parsed)
}

fn rational_field(arc: &Value, key: &str, at: &str) -> Result<BigRational, CliError> {
    let raw = match arc.get(key) {
        Some(Value::Number(num)) => num.to_string(),
        Some(Value::String(s)) => s.clone(),
        _ => return Err(CliError::input("ParseError", format!("{at}: missing {key:?}"))),
    };
    parse_rational(&raw)
        .ok_or_else(|| CliError::input("NonRationalInExactMode", format!("{at}: {key:?} = {raw:?} is not a rational")))
}

fn vertex_label(value: Option<&Value>, n: usize, at: &str) -> Result<Option<usize>, CliError> {
    match value {
        Some(Value::String(s)) if s == "dagger" || s == "†" => Ok(None),
        Some(v) => match v.as_u64() {
            Some(label) if (1..=n as u64).contains(&label) => Ok(Some(label as usize - 1)),
            _ => Err(CliError::input("ParseError", format!("{at}: vertex {v} is not in 1..={n}"))),
        },
        None => Err(CliError::input("ParseError", format!("{at}: missing vertex"))),
    }
}

fn parse_tropical(n: usize, arcs: &Value) -> Result<ExponentialMarkovInput, CliError> {
    let arcs = arcs.as_array().ok_or_else(|| CliError::input("ParseError", "\"arcs\" must be an array"))?;
    let mut inp = ExponentialMarkovInput::new(n).map_err(CliError::from)?;
    for (idx, arc) in arcs.iter().enumerate() {
        let at = format!("arcs[{idx}]");
        let from = vertex_label(arc.get("from"), n, &at)?
            .ok_or_else(|| CliError::input("ParseError", format!("{at}: arcs cannot leave the dagger vertex")))?;
        let to = vertex_label(arc.get("to"), n, &at)?;
        let order = rational_field(arc, "V", &at)?;
        let prefactor = if arc.get("m").is_some() { rational_field(arc, "m", &at)? } else { BigRational::from_integer(1.into()) };
        let rate = ExpRate::new(order, prefactor).map_err(|e| CliError::input("InvalidRate", format!("{at}: {e}")))?;
        let duplicate = match to {
            Some(to) => inp.rate(from, to).is_some(),
            None => inp.killing(from).is_some(),
        };
        if duplicate {
            return Err(CliError::input("ParseError", format!("{at}: duplicate arc")));
        }
        match to {
            Some(to) => inp.set_rate(from, to, rate),
            None => inp.set_killing(from, rate),
        }
        .map_err(|e| CliError::input("ParseError", format!("{at}: {e}")))?;
    }
    Ok(inp)
}
