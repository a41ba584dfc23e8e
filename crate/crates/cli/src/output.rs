use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{Failure, Global};

/// Provenance record written next to every CSV.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    /// SHA-256 of the canonical JSON form of `config`.
    pub config_hash: String,
    pub seed: u64,
    pub tool_version: &'static str,
    pub timestamp: String,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, config: Value) -> Self {
        Self {
            command: command.into(),
            config_hash: config_hash(&config),
            seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config,
            result: None,
        }
    }

    pub fn with_result(mut self, result: Value) -> Self {
        self.result = Some(result);
        self
    }

    pub fn write_next_to(&self, out: &Path) -> Result<PathBuf, Failure> {
        let path = out.with_extension("manifest.json");
        let mut text = serde_json::to_string_pretty(self).map_err(Failure::runtime)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

/// Object keys are sorted (`serde_json` maps are ordered), so equal configs
/// hash equally.
pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("json value serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// `path` under `--out-dir` when it is relative; parent directories are
/// created.
pub fn resolve_out(global: &Global, path: &Path) -> Result<PathBuf, Failure> {
    let full = match &global.out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    };
    if let Some(parent) = full.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(full)
}

/// CSV writer with `\n` line endings.
pub fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, Failure> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(Failure::runtime)
}

/// Pretty JSON on stdout. A closed pipe (`| head`) is not an error.
pub fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::runtime)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}
