//! JSON-lines and CSV writers shared by every subcommand.

use std::io::{self, Write};

use cfq_core::ExactRational;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Named fields in column order. JSON output sorts the keys.
#[derive(Default)]
pub struct Record(Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn field(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.0.push((name.to_string(), v.into()));
        self
    }

    /// `name` as `"p/q"` and `name_value` as its nearest double.
    pub fn exact(self, name: &str, x: &ExactRational) -> Self {
        self.field(name, x.to_string()).field(&format!("{name}_value"), x.to_f64())
    }

    fn to_json(&self) -> Value {
        Value::Object(self.0.iter().cloned().collect::<Map<_, _>>())
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

pub struct Sink {
    out: Box<dyn Write + Send>,
    pub format: Format,
    header: Option<Vec<String>>,
}

impl Sink {
    pub fn new(out: Box<dyn Write + Send>, format: Format) -> Self {
        Sink { out, format, header: None }
    }

    /// One line of a table; the first call also writes the CSV header.
    pub fn row(&mut self, rec: Record) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", rec.to_json()),
            Format::Csv => {
                let names: Vec<String> = rec.0.iter().map(|(k, _)| k.clone()).collect();
                if self.header.is_none() {
                    writeln!(self.out, "{}", names.join(","))?;
                    self.header = Some(names);
                }
                let cells: Vec<String> = rec.0.iter().map(|(_, v)| csv_cell(v)).collect();
                writeln!(self.out, "{}", cells.join(","))
            }
        }
    }

    pub fn one(&mut self, rec: Record) -> io::Result<()> {
        self.row(rec)
    }

    /// Full serialized `value` for JSON, the flat `rec` for CSV.
    pub fn row_or_value<T: Serialize>(&mut self, rec: Record, value: &T) -> io::Result<()> {
        match self.format {
            Format::Json => self.value(value),
            Format::Csv => self.row(rec),
        }
    }

    pub fn value<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        let v = serde_json::to_value(value).map_err(io::Error::other)?;
        writeln!(self.out, "{v}")
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}
