use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::args::{Common, Format};
use crate::CliError;

/// A report plus, optionally, the rows to emit in CSV form.
pub struct Report {
    pub json: Value,
    pub rows: Option<Vec<Value>>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Self { json, rows: None }
    }

    pub fn with_rows(json: Value, rows: Vec<Value>) -> Self {
        Self { json, rows: Some(rows) }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn to_csv(report: &Report) -> Result<Vec<u8>, CliError> {
    let rows = match &report.rows {
        Some(rows) => rows.clone(),
        None => vec![report.json.clone()],
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(o)) => o.keys().cloned().collect(),
        _ => vec!["value".into()],
    };
    w.write_record(&header).map_err(|e| CliError::Run(e.to_string()))?;
    for row in &rows {
        let record: Vec<String> = match row {
            Value::Object(o) => header.iter().map(|h| o.get(h).map(cell).unwrap_or_default()).collect(),
            other => vec![cell(other)],
        };
        w.write_record(&record).map_err(|e| CliError::Run(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Run(e.to_string()))
}

pub fn emit(common: &Common, report: &Report) -> Result<(), CliError> {
    let csv_by_ext = common.out.as_deref().and_then(Path::extension).is_some_and(|e| e == "csv");
    let format = common.format.unwrap_or(if csv_by_ext { Format::Csv } else { Format::Json });
    let bytes = match format {
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&report.json).map_err(|e| CliError::Run(e.to_string()))?;
            b.push(b'\n');
            b
        }
        Format::Csv => to_csv(report)?,
    };
    match &common.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io { path: path.clone(), source: e }),
        None => std::io::stdout().write_all(&bytes).map_err(|e| CliError::Run(e.to_string())),
    }
}
