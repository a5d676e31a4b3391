use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, Result};
use crate::output::{render, write_atomic, RunManifest};
use crate::registry::Registry;
use crate::table::{Cell, Record, ResultTable};

pub const GRID_LIMIT: usize = 1_000_000;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Config with every default filled in.
    pub config: ExperimentConfig,
    pub manifest: RunManifest,
    pub table: ResultTable,
}

impl RunOutcome {
    pub fn render(&self, format: Format) -> Result<String> {
        render(format, &self.config, &self.manifest, &self.table)
    }

    /// Write to the configured path atomically, or to stdout when none is set.
    pub fn emit(&self) -> Result<()> {
        let doc = self.render(self.config.output.format)?;
        match &self.config.output.path {
            Some(p) => write_atomic(p, doc.as_bytes()),
            None => std::io::stdout().write_all(doc.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), message: e.to_string() }),
        }
    }
}

fn manifest(cfg: &ExperimentConfig, deterministic: bool, started: Instant, table: &ResultTable, summary: &Record) -> RunManifest {
    RunManifest {
        experiment: cfg.experiment.clone(),
        config_hash: cfg.hash(),
        version: VERSION.to_string(),
        wall_seconds: started.elapsed().as_secs_f64(),
        deterministic,
        rows: table.rows.len(),
        summary: summary.iter().cloned().collect(),
    }
}

pub fn run(cfg: &ExperimentConfig, registry: &Registry) -> Result<RunOutcome> {
    let started = Instant::now();
    let resolved = cfg.resolved(registry)?;
    let exp = registry.get(&resolved.experiment).expect("resolved configs name registered experiments");
    let table = exp.run(&resolved.parameters, resolved.seed).map_err(|source| CliError::Experiment { experiment: resolved.experiment.clone(), source })?;
    let manifest = manifest(&resolved, exp.deterministic(), started, &table, &table.summary);
    Ok(RunOutcome { config: resolved, manifest, table })
}

/// Cartesian product of the grid axes: keys in lexicographic order, the last key varying
/// fastest.
pub fn grid_points(grid: &BTreeMap<String, Vec<toml::Value>>) -> Result<Vec<Vec<(String, toml::Value)>>> {
    let size = grid.values().try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128)).unwrap_or(u128::MAX);
    if size > GRID_LIMIT as u128 {
        return Err(CliError::GridTooLarge { size, limit: GRID_LIMIT });
    }
    let mut points: Vec<Vec<(String, toml::Value)>> = vec![Vec::new()];
    for (key, values) in grid {
        points = points.into_iter().flat_map(|p| values.iter().map(move |v| {
            let mut q = p.clone();
            q.push((key.clone(), v.clone()));
            q
        })).collect();
    }
    Ok(points)
}

/// One row per grid point: the axis values followed by that point's summary metrics.
pub fn sweep(cfg: &ExperimentConfig, registry: &Registry) -> Result<RunOutcome> {
    let started = Instant::now();
    let resolved = cfg.resolved(registry)?;
    let exp = registry.get(&resolved.experiment).expect("resolved configs name registered experiments");
    let points = grid_points(&resolved.grid)?;
    let results: Vec<Record> = points
        .par_iter()
        .map(|point| {
            let mut params = resolved.parameters.clone();
            params.extend(point.iter().cloned());
            let t = exp.run(&params, resolved.seed).map_err(|source| CliError::Experiment { experiment: resolved.experiment.clone(), source })?;
            let mut row: Record = point.iter().map(|(k, v)| (k.clone(), Cell::from_toml(v))).collect();
            row.extend(t.summary.into_iter().filter(|(k, _)| !resolved.grid.contains_key(k)));
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let summary: Record = vec![("points".into(), Cell::from(results.len()))];
    let table = ResultTable::from_records(results, summary.clone());
    let manifest = manifest(&resolved, exp.deterministic(), started, &table, &summary);
    Ok(RunOutcome { config: resolved, manifest, table })
}
