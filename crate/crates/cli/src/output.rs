//! CSV and JSON result files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::experiments::{Experiment, Row};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutRow {
    pub sweep_index: usize,
    pub params: BTreeMap<String, Value>,
    pub results: Row,
    pub status: Status,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// Everything one sweep point produced.
#[derive(Debug)]
pub struct Record {
    pub rows: Vec<OutRow>,
    pub config_error: Option<String>,
}

impl Record {
    pub fn ok(index: usize, params: BTreeMap<String, Value>, rows: Vec<Row>, wall: f64) -> Self {
        let rows = rows
            .into_iter()
            .map(|results| OutRow {
                sweep_index: index,
                params: params.clone(),
                results,
                status: Status::Ok,
                error: None,
                wall_time_s: Some(wall),
            })
            .collect();
        Self { rows, config_error: None }
    }

    pub fn failed(index: usize, params: BTreeMap<String, Value>, error: String, wall: f64) -> Self {
        let row = OutRow {
            sweep_index: index,
            params,
            results: Row::new(),
            status: Status::Failed,
            error: Some(error),
            wall_time_s: Some(wall),
        };
        Self { rows: vec![row], config_error: None }
    }

    pub fn config_error(index: usize, msg: String) -> Self {
        Self { rows: Vec::new(), config_error: Some(format!("sweep point {index}: {msg}")) }
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

fn sink(dest: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match dest {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            }
            let f = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

pub fn write_csv(exp: &Experiment, seed: u64, records: &[Record], dest: Option<&Path>, timing: bool) -> Result<(), CliError> {
    let mut out = sink(dest)?;
    let mut header = format!("# lowensim {} seed={seed}", exp.name);
    if timing {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        header.push_str(&format!(" unix_time={now}"));
    }
    writeln!(out, "{header}").map_err(io_err)?;

    let params: Vec<&str> = exp.params.iter().map(|p| p.0).collect();
    let mut cols: Vec<&str> = vec!["sweep_index", "seed"];
    cols.extend(&params);
    cols.extend(exp.columns);
    cols.extend(["status", "error"]);
    if timing {
        cols.push("wall_time_s");
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&cols).map_err(io_err)?;
    for row in records.iter().flat_map(|r| &r.rows) {
        let mut line = vec![row.sweep_index.to_string(), seed.to_string()];
        line.extend(params.iter().map(|k| cell(row.params.get(*k))));
        line.extend(exp.columns.iter().map(|k| cell(row.results.get(*k))));
        line.push(cell(Some(&serde_json::to_value(row.status).map_err(io_err)?)));
        line.push(row.error.clone().unwrap_or_default());
        if timing {
            line.push(row.wall_time_s.map(|t| format!("{t:.6}")).unwrap_or_default());
        }
        w.write_record(&line).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    experiment: &'a str,
    seed: u64,
    rows: Vec<OutRow>,
}

/// Mirror of the CSV rows; next to the CSV as `<name>.json`, or stdout.
pub fn write_json(exp: &Experiment, seed: u64, records: &[Record], dest: Option<&Path>, timing: bool) -> Result<(), CliError> {
    let rows = records
        .iter()
        .flat_map(|r| r.rows.iter().cloned())
        .map(|mut r| {
            if !timing {
                r.wall_time_s = None;
            }
            r
        })
        .collect();
    let doc = JsonDoc { experiment: exp.name, seed, rows };
    let path: Option<PathBuf> = dest.map(|p| p.with_extension("json"));
    let mut out = sink(path.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &doc).map_err(io_err)?;
    writeln!(out).map_err(io_err)?;
    out.flush().map_err(io_err)
}
