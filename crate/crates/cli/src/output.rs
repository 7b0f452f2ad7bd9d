//! Output records and their JSON/CSV rendering.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which is exact
//! for `f64` and makes golden files byte-stable. `--pretty` switches to
//! 7-significant-digit human display and indented JSON.

use serde_json::{Map, Number, Value};
use std::str::FromStr;

/// One scalar field.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}
impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}
impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}
impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}
impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.to_owned())
    }
}
impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Str(v)
    }
}

/// Ordered list of named fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fields(pub Vec<(String, Field)>);

impl Fields {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.0.push((key.to_owned(), value.into()));
    }

    pub fn extend(&mut self, other: Fields) {
        self.0.extend(other.0);
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }
}

/// Result of one command evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Fields,
    pub outputs: Fields,
    pub metadata: Fields,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn format_number(x: f64, pretty: bool) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if !pretty {
        return format!("{x:.16e}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..7).contains(&mag) {
        let decimals = (6 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        format!("{x:.6e}")
    }
}

fn field_text(f: &Field, pretty: bool) -> String {
    match f {
        Field::Num(x) => format_number(*x, pretty),
        Field::Int(i) => i.to_string(),
        Field::Str(s) => s.clone(),
        Field::Bool(b) => b.to_string(),
    }
}

fn field_json(f: &Field, pretty: bool) -> Value {
    match f {
        Field::Num(x) if x.is_finite() => {
            Value::Number(Number::from_str(&format_number(*x, pretty)).expect("valid JSON number"))
        }
        Field::Num(x) => Value::String(format_number(*x, pretty)),
        Field::Int(i) => Value::Number((*i).into()),
        Field::Str(s) => Value::String(s.clone()),
        Field::Bool(b) => Value::Bool(*b),
    }
}

fn fields_json(fields: &Fields, pretty: bool) -> Value {
    let mut map = Map::new();
    for (k, v) in &fields.0 {
        map.insert(k.clone(), field_json(v, pretty));
    }
    Value::Object(map)
}

pub fn record_json(r: &OutputRecord, pretty: bool) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), Value::String(r.command.clone()));
    map.insert("inputs".into(), fields_json(&r.inputs, pretty));
    map.insert("outputs".into(), fields_json(&r.outputs, pretty));
    map.insert("metadata".into(), fields_json(&r.metadata, pretty));
    Value::Object(map)
}

/// Renders records. JSON: a single object when `as_array` is false and there
/// is exactly one record, otherwise an array. CSV: the output fields only,
/// header from the first record.
pub fn emit(
    records: &[OutputRecord],
    format: Format,
    pretty: bool,
    as_array: bool,
) -> Result<String, String> {
    match format {
        Format::Json => {
            let value = if !as_array && records.len() == 1 {
                record_json(&records[0], pretty)
            } else {
                Value::Array(records.iter().map(|r| record_json(r, pretty)).collect())
            };
            let mut s = if pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            }
            .map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let Some(first) = records.first() else {
                return Ok(String::new());
            };
            let header: Vec<&str> = first.outputs.keys().collect();
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(Vec::new());
            w.write_record(&header).map_err(|e| e.to_string())?;
            for r in records {
                let keys: Vec<&str> = r.outputs.keys().collect();
                if keys != header {
                    return Err(format!(
                        "CSV output needs homogeneous records; got columns {keys:?} after {header:?}"
                    ));
                }
                w.write_record(r.outputs.0.iter().map(|(_, v)| field_text(v, pretty)))
                    .map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}
