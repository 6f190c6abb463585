use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::config::RunConfig;
use crate::error::CliError;

/// A flat table for CSV export.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub result: Value,
    /// Per-member values; when absent, CSV falls back to the scalar fields.
    pub table: Option<Table>,
}

impl Report {
    pub fn scalar(result: Value) -> Self {
        Report { result, table: None }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    config: &'a RunConfig,
    result: &'a Value,
}

pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn emit(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &Document { config: cfg, result: &report.result })
                .map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            match &report.table {
                Some(t) => {
                    w.write_record(&t.headers)?;
                    for row in &t.rows {
                        w.write_record(row)?;
                    }
                }
                None => {
                    w.write_record(["field", "value"])?;
                    if let Value::Object(map) = &report.result {
                        for (k, v) in map.iter().filter(|(_, v)| !v.is_object() && !v.is_array()) {
                            w.write_record([k.as_str(), &cell(v)])?;
                        }
                    }
                }
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}
