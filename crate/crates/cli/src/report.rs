use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format};
use crate::run::execute;
use crate::CliError;

/// Version of the report layout below.
pub const SCHEMA: u32 = 1;

/// Payload keys that hold timings and are left out of the fingerprint.
const VOLATILE_KEYS: &[&str] = &["runtime_ms", "wall_time_ms"];

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub config: ExperimentConfig,
    /// `ok`, `verification-failure`, `config-error` or `cap-exceeded`.
    pub status: String,
    pub exit_code: i32,
    pub payload: Value,
    pub wall_time_ms: u64,
    /// SHA-256 of the payload without its timing fields.
    pub fingerprint: String,
    #[serde(skip)]
    pub csv: Option<String>,
}

fn strip_volatile(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| !VOLATILE_KEYS.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), strip_volatile(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(strip_volatile).collect()),
        other => other.clone(),
    }
}

/// Hex SHA-256 of the canonical (sorted-key) JSON of the payload, ignoring
/// timings.
pub fn fingerprint(payload: &Value) -> String {
    let canonical = serde_json::to_vec(&strip_volatile(payload)).expect("JSON values serialise");
    hex::encode(Sha256::digest(&canonical))
}

/// Runs one configuration; failures become a report with an error payload.
pub fn run(cfg: &ExperimentConfig) -> RunReport {
    let t0 = Instant::now();
    let (status, exit_code, payload, csv) = match execute(cfg) {
        Ok(out) if out.verified => ("ok".to_string(), 0, out.payload, out.csv),
        Ok(out) => ("verification-failure".to_string(), 1, out.payload, out.csv),
        Err(e) => (e.status().to_string(), e.exit_code(), json!({"error": e.to_string()}), None),
    };
    RunReport {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        status,
        exit_code,
        fingerprint: fingerprint(&payload),
        payload,
        wall_time_ms: t0.elapsed().as_millis() as u64,
        csv,
    }
}

impl RunReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialise") + "\n",
            Format::Csv => self.csv.clone().unwrap_or_else(|| key_value_csv(&self.payload)),
        }
    }
}

/// Two-column CSV of the top-level payload fields; nested values are
/// written as compact JSON.
pub fn key_value_csv(payload: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    if let Value::Object(map) = payload {
        for (k, v) in map {
            let cell = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record([k.as_str(), cell.as_str()]).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV output is UTF-8")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
