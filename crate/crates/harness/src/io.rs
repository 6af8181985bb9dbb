//! Run-directory persistence: CSV series, mesh export and the manifest.

use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use nltr_core::mesh::write_mesh;
use nltr_core::{Mesh64, Signal64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::model::Trace;

/// Write `t_s,u_x_m,u_y_m` with every value in shortest round-trip form.
pub fn write_trace<W: Write>(mut w: W, ux: &Signal64, uy: &Signal64) -> std::io::Result<()> {
    writeln!(w, "t_s,u_x_m,u_y_m")?;
    for i in 0..ux.len().min(uy.len()) {
        writeln!(w, "{:e},{:e},{:e}", ux.time(i), ux.samples[i], uy.samples[i])?;
    }
    Ok(())
}

/// Read a `t_s,u_x_m,u_y_m` file back into its two components.
pub fn read_trace<R: BufRead>(r: R) -> Result<(Signal64, Signal64), HarnessError> {
    let mut t = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "t_s,u_x_m,u_y_m" {
                return Err(HarnessError::Config(format!("unexpected trace header {line:?}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| HarnessError::Config(format!("trace line {}: {e}", i + 1)))?;
        if cols.len() != 3 {
            return Err(HarnessError::Config(format!("trace line {}: expected 3 columns", i + 1)));
        }
        t.push(cols[0]);
        x.push(cols[1]);
        y.push(cols[2]);
    }
    Ok((Signal64::from_times(&t, x)?, Signal64::from_times(&t, y)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config_hash: String,
    pub harness_version: String,
    pub files: Vec<FileEntry>,
    pub metrics: toml::Table,
}

/// Output directory that tracks what it writes for the manifest.
#[derive(Debug)]
pub struct RunDir {
    pub root: PathBuf,
    files: Vec<String>,
    pub metrics: toml::Table,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self, HarnessError> {
        std::fs::create_dir_all(root)?;
        Ok(RunDir { root: root.to_path_buf(), files: Vec::new(), metrics: toml::Table::new() })
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    /// Write a file through `f` and register it.
    pub fn write_with(
        &mut self,
        rel: &str,
        f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> Result<(), HarnessError> {
        let path = self.path(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut w = BufWriter::new(File::create(&path)?);
        f(&mut w)?;
        w.flush()?;
        self.register(rel);
        Ok(())
    }

    /// Record a file written by someone else.
    pub fn register(&mut self, rel: &str) {
        if !self.files.iter().any(|f| f == rel) {
            self.files.push(rel.to_string());
        }
    }

    pub fn signal(&mut self, rel: &str, s: &Signal64) -> Result<(), HarnessError> {
        self.write_with(rel, |w| s.write_csv(w))
    }

    pub fn trace(&mut self, rel: &str, t: &Trace) -> Result<(), HarnessError> {
        self.write_with(rel, |w| write_trace(w, &t.ux, &t.uy))
    }

    pub fn mesh(&mut self, rel: &str, mesh: &Mesh64) -> Result<(), HarnessError> {
        self.write_with(rel, |w| write_mesh(mesh, w))
    }

    pub fn config(&mut self, cfg: &ExperimentConfig) -> Result<(), HarnessError> {
        let text = cfg.to_toml();
        self.write_with("config.toml", |w| w.write_all(text.as_bytes()))
    }

    pub fn metric(&mut self, key: &str, value: impl Into<toml::Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }

    /// Hash every registered file and write `manifest.toml`.
    pub fn finish(self, experiment: &str, cfg: &ExperimentConfig) -> Result<Manifest, HarnessError> {
        let mut files = Vec::with_capacity(self.files.len());
        let mut names = self.files.clone();
        names.sort();
        for rel in names {
            files.push(FileEntry { sha256: sha256_file(&self.path(&rel))?, path: rel });
        }
        let manifest = Manifest {
            experiment: experiment.to_string(),
            config_hash: cfg.hash(),
            harness_version: env!("CARGO_PKG_VERSION").to_string(),
            files,
            metrics: self.metrics,
        };
        let text = toml::to_string(&manifest).map_err(|e| HarnessError::Config(e.to_string()))?;
        std::fs::write(self.root.join("manifest.toml"), text)?;
        Ok(manifest)
    }
}

pub fn sha256_file(path: &Path) -> Result<String, HarnessError> {
    Ok(hex::encode(Sha256::digest(std::fs::read(path)?)))
}

pub fn read_manifest(path: &Path) -> Result<Manifest, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
}
