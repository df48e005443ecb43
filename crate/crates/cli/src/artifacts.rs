// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Output directories. Every file is staged in memory, then written to a
//! temporary file and renamed into place, so a failed run never leaves a
//! truncated artifact. The manifest is written last.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, Result};

pub const MANIFEST_SCHEMA: u32 = 1;
pub const MANIFEST: &str = "manifest.json";
/// Names the default output root when `--out-dir` is absent.
pub const OUT_ENV: &str = "CRYOTWIN_OUT_DIR";

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema: u32,
    pub version: String,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    /// Resolved configuration; saved alongside as `config.toml`.
    pub config: Config,
    pub inputs: Vec<String>,
    pub artifacts: Vec<String>,
    pub started_unix_s: f64,
    pub wall_clock_s: f64,
}

/// Files of one run, held until `commit`.
pub struct Run {
    started: Instant,
    started_unix_s: f64,
    files: Vec<(String, Vec<u8>)>,
}

impl Default for Run {
    fn default() -> Self {
        Self::new()
    }
}

impl Run {
    pub fn new() -> Self {
        let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        Self { started: Instant::now(), started_unix_s: unix, files: Vec::new() }
    }

    pub fn add(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), bytes.into()));
    }

    /// Write every staged file plus `config.toml` and the manifest into `dir`.
    pub fn commit(mut self, dir: &Path, command: Vec<String>, seed: Option<u64>, config: &Config, inputs: Vec<String>) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        self.add("config.toml", config.to_toml());
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            written.push(write_atomic(&dir.join(name), bytes)?);
        }
        let manifest = Manifest {
            schema: MANIFEST_SCHEMA,
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            seed,
            config: config.clone(),
            inputs,
            artifacts: self.files.iter().map(|(n, _)| n.clone()).collect(),
            started_unix_s: self.started_unix_s,
            wall_clock_s: self.started.elapsed().as_secs_f64(),
        };
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        written.push(write_atomic(&dir.join(MANIFEST), json.as_bytes())?);
        Ok(written)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<PathBuf> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).and_then(|_| tmp.as_file().sync_all()).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(path.to_path_buf())
}

/// `--out-dir` if given, else `name` under the root from the environment or `cryotwin-out`.
pub fn output_dir(explicit: Option<&Path>, name: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cryotwin-out"));
            root.join(name)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_writes_manifest_last_and_lists_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut run = Run::new();
        run.add("a.csv", "x\n1\n");
        let out = run.commit(dir.path(), vec!["test".into()], Some(3), &Config::default(), vec![]).unwrap();
        assert_eq!(out.last().unwrap().file_name().unwrap(), MANIFEST);
        let m: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join(MANIFEST)).unwrap()).unwrap();
        assert_eq!(m["artifacts"], serde_json::json!(["a.csv", "config.toml"]));
        assert_eq!(m["seed"], 3);
        assert_eq!(std::fs::read_to_string(dir.path().join("a.csv")).unwrap(), "x\n1\n");
        // No temporary files remain.
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
    }

    #[test]
    fn explicit_dir_wins() {
        assert_eq!(output_dir(Some(Path::new("/x/y")), "run"), PathBuf::from("/x/y"));
    }
}
