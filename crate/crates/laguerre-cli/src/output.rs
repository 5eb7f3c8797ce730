//! CSV and manifest emission. CSV cells are plain (no field needs quoting:
//! labels avoid commas, numbers are serialized with 17 significant digits so
//! they round-trip bit-exactly); manifests are JSON, written atomically
//! after all referenced outputs exist.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// 17 significant digits: enough to reproduce any f64 exactly on parse.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(headers: &[&str]) -> Self {
        CsvTable {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push_str("\r\n");
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push_str("\r\n");
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.render())
    }

    pub fn print(&self) {
        print!("{}", self.render());
    }
}

#[derive(Serialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub pass_count: usize,
    pub fail_count: usize,
}

/// Run manifest: config echo, version, wall clock, per-suite pass counts and
/// digests of every file the run wrote.
#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub artifact_version: String,
    pub config: serde_json::Value,
    pub started_unix: f64,
    pub wall_seconds: f64,
    pub suites: Vec<SuiteSummary>,
    pub outputs: Vec<OutputFile>,
}

pub fn file_digest(path: &Path) -> std::io::Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex::encode(hasher.finalize()))
}

impl Manifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Manifest {
            command: command.to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            started_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs_f64())
                .unwrap_or(0.0),
            wall_seconds: 0.0,
            suites: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_output(&mut self, path: &Path) -> std::io::Result<()> {
        self.outputs.push(OutputFile {
            path: path.display().to_string(),
            sha256: file_digest(path)?,
        });
        Ok(())
    }

    /// Atomic write: temp file in the target directory, then rename.
    pub fn write_atomic(&self, path: &Path) -> std::io::Result<()> {
        let tmp: PathBuf = path.with_extension("json.tmp");
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string_pretty(self).unwrap().as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)
    }
}
