//! Report emission: per-trial trace CSV, the summary JSON document, and
//! the sweep matrix CSV.
//!
//! Numeric cells use Rust's shortest round-trip float formatting, so
//! repeated runs with the same seed produce byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use baro_core::algo::Trace;
use baro_core::diagnostics::{OccupationProfile, RankProfile, RatioReport};

use crate::config::ExperimentConfig;
use crate::runner::ExperimentOutput;
use crate::CliError;

pub const TRACE_CSV_HEADER: &str =
    "t,is_ro,value,weight,rank,tentative,blocked_main,blocked_outer,picked,occupation";

pub const SWEEP_CSV_HEADER: &str = "k,gamma,pattern,algorithm,ratio_mean,ratio_ci95,trials,seed";

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// One trace as CSV (fixed column set, booleans as 0/1, empty rank on
/// adversarial rows).
pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::with_capacity(trace.records.len() * 48 + 64);
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = write!(
            out,
            "{},{},{},{},",
            r.time,
            bit(r.is_ro),
            r.item.value,
            r.item.weight
        );
        if let Some(rank) = r.rank {
            let _ = write!(out, "{rank}");
        }
        let _ = writeln!(
            out,
            ",{},{},{},{},{}",
            bit(r.tentative),
            bit(r.blocked_main),
            bit(r.blocked_outer),
            bit(r.picked),
            r.occupation
        );
    }
    out
}

#[derive(Serialize)]
pub struct InvariantsSummary {
    pub all_traces_valid: bool,
}

/// The summary document written next to the per-trial CSVs.
#[derive(Serialize)]
pub struct Summary<'a> {
    pub schema_version: u32,
    pub config: &'a ExperimentConfig,
    pub ratio: &'a RatioReport,
    pub rank_profile: &'a RankProfile,
    pub occupation: &'a OccupationProfile,
    pub invariants: InvariantsSummary,
}

pub fn summary_json(config: &ExperimentConfig, out: &ExperimentOutput) -> String {
    let summary = Summary {
        schema_version: 1,
        config,
        ratio: &out.ratio,
        rank_profile: &out.rank_profile,
        occupation: &out.occupation,
        invariants: InvariantsSummary {
            // run_trials validated every trace before handing them over.
            all_traces_valid: true,
        },
    };
    serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
}

/// Write per-trial CSVs plus `summary.json` into `dir`.
pub fn write_run_reports(
    dir: &Path,
    config: &ExperimentConfig,
    out: &ExperimentOutput,
) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (i, trace) in out.traces.iter().enumerate() {
        let path = dir.join(format!("trial_{i:04}.csv"));
        std::fs::write(&path, trace_csv(trace)).map_err(|e| CliError::io(&path, e))?;
    }
    let path = dir.join("summary.json");
    std::fs::write(&path, summary_json(config, out)).map_err(|e| CliError::io(&path, e))?;
    Ok(())
}

/// One sweep row. Ratio cells are empty when the benchmark is zero.
pub fn sweep_row(config: &ExperimentConfig, ratio: &RatioReport) -> String {
    let fmt_opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{}",
        config.k,
        config.gamma,
        config.pattern.name(),
        match config.algorithm {
            crate::config::AlgorithmChoice::Baro => "baro",
            crate::config::AlgorithmChoice::Primal => "primal",
            crate::config::AlgorithmChoice::Topk => "topk",
        },
        fmt_opt(ratio.ratio_mean),
        fmt_opt(ratio.ratio_ci95),
        ratio.trials,
        config.base_seed,
    )
}

pub fn write_sweep_csv(dir: &Path, rows: &[String]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    let path = dir.join("sweep.csv");
    std::fs::write(&path, out).map_err(|e| CliError::io(&path, e))
}
