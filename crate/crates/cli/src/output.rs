//! Report files. The summary is deterministic for a given config and seed;
//! anything time-dependent goes to `metadata.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::pipeline::ExperimentOutput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub fn summary_json(outputs: &[ExperimentOutput], seed: u64) -> String {
    let experiments: Map<String, Value> = outputs.iter().map(|o| (o.name.clone(), o.summary.clone())).collect();
    let mut text = serde_json::to_string_pretty(&json!({ "seed": seed, "experiments": experiments }))
        .expect("summary serializes");
    text.push('\n');
    text
}

fn write(path: PathBuf, contents: &[u8]) -> Result<PathBuf, CliError> {
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn write_csv(path: PathBuf, output: &ExperimentOutput, start: usize) -> Result<PathBuf, CliError> {
    let table = &output.runs[start];
    let io_err = |e: csv::Error| CliError::io(&path, std::io::Error::other(e.to_string()));
    let mut w = csv::Writer::from_path(&path).map_err(io_err)?;
    for row in &table.rows {
        w.serialize(row).map_err(io_err)?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Writes `summary.json`, `metadata.json` and, for CSV output, one file per run.
pub fn write_reports(
    dir: &Path,
    outputs: &[ExperimentOutput],
    seed: u64,
    format: Format,
    command: &str,
    config: Option<&Path>,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = vec![write(dir.join("summary.json"), summary_json(outputs, seed).as_bytes())?];
    if format == Format::Csv {
        for output in outputs {
            for start in 0..output.runs.len() {
                let name = format!("{}.run{}.csv", output.name, output.runs[start].start);
                written.push(write_csv(dir.join(name), output, start)?);
            }
        }
    }
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let metadata = json!({
        "generated_unix": now,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config.map(|p| p.display().to_string()),
        "seed": seed,
        "format": format,
        "experiments": outputs.iter().map(|o| o.name.clone()).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&metadata).expect("metadata serializes");
    text.push('\n');
    written.push(write(dir.join("metadata.json"), text.as_bytes())?);
    Ok(written)
}
