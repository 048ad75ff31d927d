//! Parallel sweep over states. Each trial derives its own seed, and rows
//! are assembled in state order, so the output equals the sequential run.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use tribasis::metrics::{summarize, DimensionPlan, StateTrials};
use tribasis::{SweepConfig, SweepRow};

use crate::error::{CliError, CliResult};
use crate::formats::{read_json, SweepConfigDoc};

#[derive(Debug, Serialize)]
struct CsvRow {
    d: usize,
    #[serde(rename = "N")]
    n: u64,
    total_ensemble: u64,
    mean: f64,
    median: f64,
    q25: f64,
    q75: f64,
    omega_f_fraction: f64,
    omega_f_mean: f64,
    complement_mean: f64,
    failures: usize,
}

impl From<&SweepRow> for CsvRow {
    fn from(r: &SweepRow) -> Self {
        Self {
            d: r.d,
            n: r.shots,
            total_ensemble: r.total_ensemble,
            mean: r.mean,
            median: r.median,
            q25: r.q25,
            q75: r.q75,
            omega_f_fraction: r.omega_f_fraction,
            omega_f_mean: r.omega_f_mean,
            complement_mean: r.complement_mean,
            failures: r.failures,
        }
    }
}

pub fn load_config(path: &Path) -> CliResult<SweepConfig> {
    let doc: SweepConfigDoc = read_json(path)?;
    let config = doc.to_config();
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(config)
}

/// Rows in `(d, N)` order; progress goes to stderr when `progress` is set.
pub fn run(config: &SweepConfig, parallel: bool, progress: bool) -> CliResult<Vec<SweepRow>> {
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let total = config.dimensions.len() * config.shots_grid.len();
    let mut rows = Vec::with_capacity(total);
    for &d in &config.dimensions {
        let plan = DimensionPlan::new(config, d)?;
        for &shots in &config.shots_grid {
            let per_state: Vec<StateTrials> = if parallel {
                (0..config.states)
                    .into_par_iter()
                    .map(|j| plan.run_state(config, shots, j))
                    .collect()
            } else {
                (0..config.states).map(|j| plan.run_state(config, shots, j)).collect()
            };
            rows.push(summarize(d, shots, config.method, &per_state));
            if progress {
                eprintln!("[{}/{total}] d={d} N={shots}", rows.len());
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> CliResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(CsvRow::from(row))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
