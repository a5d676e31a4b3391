//! Result documents (CSV or JSON, each headed by the resolved config and run manifest) and
//! atomic file output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, Result};
use crate::table::{Cell, ResultTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_hash: String,
    pub version: String,
    pub wall_seconds: f64,
    pub deterministic: bool,
    pub rows: usize,
    pub summary: BTreeMap<String, Cell>,
}

pub fn render(format: Format, cfg: &ExperimentConfig, manifest: &RunManifest, table: &ResultTable) -> Result<String> {
    match format {
        Format::Csv => render_csv(cfg, manifest, table),
        Format::Json => Ok(render_json(cfg, manifest, table)),
    }
}

fn render_csv(cfg: &ExperimentConfig, manifest: &RunManifest, table: &ResultTable) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("# demon {}\n# config_hash = {}\n# wall_seconds = {}\n", manifest.version, manifest.config_hash, manifest.wall_seconds));
    for line in cfg.to_toml().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io { path: "<csv buffer>".into(), message: e.to_string() };
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render)).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io { path: "<csv buffer>".into(), message: e.to_string() })?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

fn render_json(cfg: &ExperimentConfig, manifest: &RunManifest, table: &ResultTable) -> String {
    let doc = json!({
        "manifest": manifest,
        "config": cfg,
        "columns": table.columns,
        "rows": table.rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialise");
    s.push('\n');
    s
}

/// Failure injection points for [`write_atomic_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultPoint {
    Create,
    /// After half the bytes reach the temporary file.
    Write,
    Sync,
    Rename,
}

/// Write through a temporary file in the destination directory, then rename over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    write_atomic_with(path, contents, None)
}

pub fn write_atomic_with(path: &Path, contents: &[u8], fault: Option<FaultPoint>) -> Result<()> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    let injected = |p: FaultPoint| if fault == Some(p) { Err(CliError::Io { path: path.display().to_string(), message: format!("injected fault at {p:?}") }) } else { Ok(()) };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    injected(FaultPoint::Create)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    let half = contents.len() / 2;
    tmp.write_all(&contents[..half]).map_err(io)?;
    injected(FaultPoint::Write)?;
    tmp.write_all(&contents[half..]).map_err(io)?;
    tmp.flush().map_err(io)?;
    injected(FaultPoint::Sync)?;
    tmp.as_file().sync_all().map_err(io)?;
    injected(FaultPoint::Rename)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faults_leave_previous_contents_and_no_stray_files() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.csv");
        write_atomic(&target, b"old").unwrap();
        for fault in [FaultPoint::Create, FaultPoint::Write, FaultPoint::Sync, FaultPoint::Rename] {
            assert!(write_atomic_with(&target, b"new contents", Some(fault)).is_err());
            assert_eq!(std::fs::read(&target).unwrap(), b"old", "{fault:?}");
            assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1, "{fault:?}");
        }
        write_atomic(&target, b"new contents").unwrap();
        assert_eq!(std::fs::read(&target).unwrap(), b"new contents");
    }

    #[test]
    fn fault_on_fresh_path_creates_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("fresh.json");
        assert!(write_atomic_with(&target, b"{}", Some(FaultPoint::Write)).is_err());
        assert!(!target.exists());
    }
}
