//! `commdet suite`: run every experiment in a TOML config.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use toml::Spanned;

use commdet_core::experiment::{run_experiment, ExperimentResult, ExperimentSpec, RunOptions};
use commdet_core::io::{format_results, Dataset, DatasetManifest, OutputFormat};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    /// Manifest path, relative to the config file.
    manifest: Option<PathBuf>,
    /// Results file, relative to the config file.
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
    #[serde(default = "yes")]
    record_runtime: bool,
    #[serde(default, rename = "experiment")]
    experiments: Vec<Spanned<toml::Table>>,
}

fn yes() -> bool {
    true
}

#[derive(Debug)]
pub struct SuiteConfig {
    pub manifest: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub record_runtime: bool,
    pub experiments: Vec<ExperimentSpec>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parse a suite config. Errors carry `path:line:`.
pub fn parse_config(text: &str, path: &Path) -> Result<SuiteConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| line_of(text, s.start));
        anyhow!("{}:{line}: {}", path.display(), e.message())
    })?;
    if raw.experiments.is_empty() {
        bail!("{}: config defines no [[experiment]] entries", path.display());
    }
    let base = path.parent().unwrap_or(Path::new(""));
    let mut experiments = Vec::new();
    for (i, table) in raw.experiments.into_iter().enumerate() {
        let line = line_of(text, table.span().start);
        let table = table.into_inner();
        let describe = || {
            let field = |k: &str| table.get(k).and_then(|v| v.as_str()).unwrap_or("?").to_string();
            format!("experiment #{} ({}/{})", i + 1, field("dataset"), field("method"))
        };
        let spec: ExperimentSpec = table
            .clone()
            .try_into()
            .map_err(|e: toml::de::Error| anyhow!("{}:{line}: {}: {}", path.display(), describe(), e.message()))?;
        spec.validate()
            .map_err(|e| anyhow!("{}:{line}: {}: {e}", path.display(), describe()))?;
        experiments.push(spec);
    }
    Ok(SuiteConfig {
        manifest: raw.manifest.map(|m| base.join(m)),
        output: raw.output.map(|o| base.join(o)),
        format: raw.format.unwrap_or(OutputFormat::Csv),
        record_runtime: raw.record_runtime,
        experiments,
    })
}

pub struct SuiteOutcome {
    pub results: Vec<ExperimentResult>,
    /// `(spec label, error)` for every experiment that failed.
    pub failures: Vec<(String, String)>,
}

/// Run every experiment in order, loading each dataset once. Failures are
/// collected rather than aborting the suite.
pub fn run_suite(config: &SuiteConfig, manifest: &DatasetManifest) -> SuiteOutcome {
    let options = RunOptions {
        record_runtime: config.record_runtime,
    };
    let mut cache: HashMap<String, Result<Dataset, String>> = HashMap::new();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for spec in &config.experiments {
        let ds = cache
            .entry(spec.dataset.clone())
            .or_insert_with(|| manifest.load_dataset(&spec.dataset).map_err(|e| e.to_string()));
        let outcome = match ds {
            Ok(ds) => run_experiment(spec, ds, options).map_err(|e| e.to_string()),
            Err(e) => Err(e.clone()),
        };
        match outcome {
            Ok(r) => results.extend(r),
            Err(e) => failures.push((spec.label(), e)),
        }
    }
    SuiteOutcome { results, failures }
}

/// Plain-text comparison table, one line per (result, metric).
pub fn render_table(results: &[ExperimentResult]) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "dataset".into(),
        "method".into(),
        "params".into(),
        "metric".into(),
        "value".into(),
        "communities".into(),
        "runtime_ms".into(),
    ]];
    for r in results {
        for m in &r.metrics {
            rows.push([
                r.dataset.clone(),
                r.method.to_string(),
                r.params_label(),
                m.kind.to_string(),
                format!("{:.4}", m.value),
                format!("{}", r.communities),
                r.runtime_ms.map_or("-".into(), |t| format!("{t:.2}")),
            ]);
        }
    }
    let mut width = [0usize; 7];
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn write_output(results: &[ExperimentResult], format: OutputFormat, path: &Path) -> Result<()> {
    let text = format_results(results, format)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
