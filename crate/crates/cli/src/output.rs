//! Artifact writing and the per-directory manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: RunConfig,
    pub artifacts: Vec<Artifact>,
    pub wall_time_s: f64,
    pub tool_version: String,
    pub status: String,
}

/// Collects artifacts for one output directory.
pub struct Output {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
    started: Instant,
}

impl Output {
    /// Refuses a directory holding an earlier manifest unless `overwrite` is set.
    pub fn open(dir: &Path, overwrite: bool) -> Result<Self, String> {
        if dir.join(MANIFEST).exists() && !overwrite {
            return Err(format!(
                "{} already holds a manifest; pass --overwrite to replace it",
                dir.display()
            ));
        }
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        Ok(Output {
            dir: dir.to_path_buf(),
            artifacts: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), String> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
        let digest = Sha256::digest(contents.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        self.artifacts.push(Artifact {
            file: name.to_string(),
            sha256: hex,
            bytes: contents.len(),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), String> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        s.push('\n');
        self.write(name, &s)
    }

    pub fn finish(
        self,
        command: &str,
        config: &RunConfig,
        status: &str,
    ) -> Result<PathBuf, String> {
        let manifest = RunManifest {
            command: command.to_string(),
            config: config.clone(),
            artifacts: self.artifacts,
            wall_time_s: self.started.elapsed().as_secs_f64(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            status: status.to_string(),
        };
        let path = self.dir.join(MANIFEST);
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| e.to_string())?;
        fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(path)
    }
}

/// Comma-separated table with a single header row.
pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            text: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Shortest round-trip decimal for a double.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}
