//! Result tables: one row per (result, metric).

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ExperimentResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Serialize)]
struct Row<'a> {
    dataset: &'a str,
    method: &'a str,
    params: String,
    metric: String,
    value: f64,
    communities: f64,
    runtime_ms: Option<f64>,
}

fn rows(results: &[ExperimentResult]) -> Vec<Row<'_>> {
    results
        .iter()
        .flat_map(|r| {
            r.metrics.iter().map(move |m| Row {
                dataset: &r.dataset,
                method: r.method.as_str(),
                params: r.params_label(),
                metric: m.kind.to_string(),
                value: m.value,
                communities: r.communities,
                runtime_ms: r.runtime_ms,
            })
        })
        .collect()
}

/// Render results in input order. Columns: dataset, method, params, metric,
/// value, communities, runtime_ms.
pub fn format_results(results: &[ExperimentResult], format: OutputFormat) -> Result<String> {
    if results.is_empty() {
        return Err(Error::Format("no results to write".into()));
    }
    let rows = rows(results);
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| Error::Format(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn write_results(results: &[ExperimentResult], format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_results(results, format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
