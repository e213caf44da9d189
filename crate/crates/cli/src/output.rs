//! Writers for summary.csv, timing.csv, trace.jsonl and coupling files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use gw_core::io::format_coupling;
use gw_core::IterationRecord;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::run::RunRow;

pub const SUMMARY_HEADER: [&str; 19] = [
    "run_id",
    "task",
    "seed",
    "algorithm",
    "geometry",
    "rho",
    "step",
    "epsilon_reg",
    "inner_iters",
    "objective",
    "accuracy",
    "ami",
    "entropy",
    "marginal_infeasibility",
    "split_gap",
    "residual",
    "iterations",
    "converged",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    Full,
    Final,
    None,
}

impl FromStr for TraceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(TraceMode::Full),
            "final" => Ok(TraceMode::Final),
            "none" => Ok(TraceMode::None),
            other => Err(format!("expected full, final or none, got '{other}'")),
        }
    }
}

/// Shortest round-trip text; switches to exponent notation for very small or
/// large magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn summary_record(row: &RunRow) -> Vec<String> {
    let c = &row.config;
    let mut rec = vec![
        row.run_id.to_string(),
        row.task.name().to_string(),
        row.seed.to_string(),
        c.algorithm.to_string(),
        c.geometry.to_string(),
        num(c.rho),
        num(c.step),
        num(c.epsilon_reg),
        c.inner_iters.to_string(),
    ];
    match &row.outcome {
        Ok(o) => rec.extend([
            num(o.objective),
            opt(o.accuracy),
            opt(o.ami),
            num(o.entropy),
            num(o.marginal_infeasibility),
            num(o.split_gap),
            opt(o.residual),
            o.iterations.to_string(),
            o.converged.to_string(),
        ]),
        Err(_) => rec.extend(std::iter::repeat_n(String::new(), 9)),
    }
    rec.push(row.status().to_string());
    rec
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct TraceLine<'a> {
    run_id: usize,
    #[serde(flatten)]
    record: &'a IterationRecord,
}

pub fn write_all(out: &Path, rows: &[RunRow], trace: TraceMode, write_couplings: bool) -> CliResult<()> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;

    let mut summary = csv::Writer::from_writer(create(&out.join("summary.csv"))?);
    summary.write_record(SUMMARY_HEADER)?;
    for row in rows {
        summary.write_record(summary_record(row))?;
    }
    summary.flush().map_err(|e| CliError::io(&out.join("summary.csv"), e))?;

    let mut timing = csv::Writer::from_writer(create(&out.join("timing.csv"))?);
    timing.write_record(["run_id", "seconds"])?;
    for row in rows {
        let secs = row.outcome.as_ref().map(|o| num(o.seconds)).unwrap_or_default();
        timing.write_record([row.run_id.to_string(), secs])?;
    }
    timing.flush().map_err(|e| CliError::io(&out.join("timing.csv"), e))?;

    if trace != TraceMode::None {
        let path = out.join("trace.jsonl");
        let mut w = create(&path)?;
        for row in rows {
            let Ok(o) = &row.outcome else { continue };
            let records: &[IterationRecord] = match trace {
                TraceMode::Full => &o.trace,
                _ => o.trace.last().map(std::slice::from_ref).unwrap_or(&[]),
            };
            for record in records {
                serde_json::to_writer(&mut w, &TraceLine { run_id: row.run_id, record })?;
                w.write_all(b"\n").map_err(|e| CliError::io(&path, e))?;
            }
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
    }

    if write_couplings {
        for row in rows {
            let Ok(o) = &row.outcome else { continue };
            let name = if rows.len() == 1 {
                "coupling.csv".to_string()
            } else {
                format!("coupling-{}.csv", row.run_id)
            };
            let path = out.join(name);
            std::fs::write(&path, format_coupling(&o.coupling)).map_err(|e| CliError::io(&path, e))?;
        }
    }
    Ok(())
}
