//! Result bundles: `bundle.json` indexes every emitted file and echoes the
//! manifest; `provenance.json` carries the wall-clock timestamp so that the
//! other files stay byte-identical across re-runs.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::emit::{canonical_json, to_value, write_file};
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::run::Outcome;

pub const BUNDLE_FILE: &str = "bundle.json";
pub const PROVENANCE_FILE: &str = "provenance.json";
pub const RESULT_FILE: &str = "result.json";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn code_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Contents of every file of the bundle, `bundle.json` last, without the
/// provenance file.
pub fn render(m: &Manifest, outcome: &Outcome, format: Format) -> Result<Vec<(String, String)>, CliError> {
    let mut files = Vec::new();
    match format {
        Format::Json => {
            let tables: serde_json::Map<String, Value> =
                outcome.tables.iter().map(|t| (t.name.clone(), t.to_json())).collect();
            let body = json!({
                "kind": m.kind,
                "result": outcome.result,
                "tables": tables,
            });
            files.push((RESULT_FILE.to_string(), canonical_json(&body)));
        }
        Format::Csv => {
            for t in &outcome.tables {
                files.push((t.file_name(), t.to_csv()?));
            }
        }
    }
    let mut listed: Vec<String> = files.iter().map(|(name, _)| name.clone()).collect();
    listed.push(PROVENANCE_FILE.to_string());
    listed.push(BUNDLE_FILE.to_string());
    let index = json!({
        "manifest": to_value(m),
        "provenance": { "code_version": code_version(), "seed": m.seed, "file": PROVENANCE_FILE },
        "format": format,
        "status": outcome.status(),
        "exit_code": outcome.exit_code(),
        "items": outcome.items,
        "errors": to_value(&outcome.errors),
        "summary": outcome.summary,
        "files": listed,
    });
    files.push((BUNDLE_FILE.to_string(), canonical_json(&index)));
    Ok(files)
}

/// Writes the bundle into `dir`, creating it if needed. Returns the file
/// names written.
pub fn write(
    dir: &Path,
    m: &Manifest,
    outcome: &Outcome,
    format: Format,
    threads: usize,
) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let files = render(m, outcome, format)?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let provenance = json!({
        "code_version": code_version(),
        "seed": m.seed,
        "threads": threads,
        "timestamp_unix": timestamp,
    });
    write_file(dir, PROVENANCE_FILE, &canonical_json(&provenance))?;
    let mut names = vec![PROVENANCE_FILE.to_string()];
    for (name, text) in &files {
        write_file(dir, name, text)?;
        names.push(name.clone());
    }
    Ok(names)
}
