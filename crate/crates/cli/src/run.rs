//! Builds task instances, runs the solver grid and collects one row per run.

use std::path::Path;
use std::time::Instant;

use gw_core::io::read_edge_list;
use gw_core::solvers::Problem;
use gw_core::tasks::{
    adjacency_distance, euclidean_distance_matrix, gen_barabasi_albert, gen_gaussian_partition, partition_target,
    rotate_2d, run_alignment, run_match2d, run_partition, sample_2d_shape, AlignmentInstance, PartitionInstance,
    PointCloud2D, Shape,
};
use gw_core::{
    coupling_entropy, luo_tseng_residual, Coupling, IterationRecord, ProbabilityVector, SolveReport, SolverConfig,
};
use log::warn;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Align,
    Partition,
    Match2d,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Align => "align",
            Task::Partition => "partition",
            Task::Match2d => "match2d",
        }
    }
}

/// One seeded instance plus the GW problem it induces (kept for the
/// residual evaluation of the final coupling).
enum Instance {
    Align(AlignmentInstance),
    Partition(PartitionInstance, ProbabilityVector),
    Match2d(PointCloud2D, PointCloud2D),
}

struct Seeded {
    seed: u64,
    instance: Instance,
    problem: Problem,
}

#[derive(Debug, Clone)]
pub struct CellOutput {
    pub objective: f64,
    pub accuracy: Option<f64>,
    pub ami: Option<f64>,
    pub entropy: f64,
    pub marginal_infeasibility: f64,
    pub split_gap: f64,
    pub residual: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub seconds: f64,
    pub trace: Vec<IterationRecord>,
    pub coupling: Coupling,
}

#[derive(Debug)]
pub struct RunRow {
    pub run_id: usize,
    pub task: Task,
    pub seed: u64,
    pub config: SolverConfig,
    pub outcome: Result<CellOutput, gw_core::Error>,
}

impl RunRow {
    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(_) => "ok",
            Err(e) if e.is_numerical() => "numerical_instability",
            Err(_) => "error",
        }
    }
}

fn read_indices(path: &Path) -> CliResult<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.trim().parse::<usize>().map_err(|e| {
                CliError::Core(gw_core::Error::Parse {
                    line: i + 1,
                    message: format!("{}: '{}': {e}", path.display(), l.trim()),
                })
            })
        })
        .collect()
}

fn build(task: Task, s: &Settings, seed: u64) -> CliResult<Seeded> {
    match task {
        Task::Align => {
            let source = match s.path("source") {
                Some(p) => read_edge_list(p)?,
                None => gen_barabasi_albert(s.one("nodes", "50")?, s.one("attach", "2")?, seed)?,
            };
            let instance = match s.path("target") {
                Some(p) => {
                    let gt = s
                        .path("ground_truth")
                        .ok_or_else(|| CliError::Config("--target requires --ground-truth".into()))?;
                    AlignmentInstance::new(source, read_edge_list(p)?, read_indices(&gt)?)?
                }
                None => AlignmentInstance::noisy_copy(source, s.one("noise", "0")?, seed)?,
            };
            let problem = Problem::uniform(
                adjacency_distance(&instance.source),
                adjacency_distance(&instance.target),
            )?;
            Ok(Seeded {
                seed,
                instance: Instance::Align(instance),
                problem,
            })
        }
        Task::Partition => {
            let instance = match s.path("source") {
                Some(p) => {
                    let graph = read_edge_list(p)?;
                    let lp = s
                        .path("labels")
                        .ok_or_else(|| CliError::Config("--source requires --labels for partition".into()))?;
                    let labels = read_indices(&lp)?;
                    if labels.len() != graph.num_nodes() {
                        return Err(gw_core::Error::DimensionMismatch {
                            what: "labels vs graph nodes".into(),
                            left: labels.len(),
                            right: graph.num_nodes(),
                        }
                        .into());
                    }
                    let implied = labels.iter().max().map_or(1, |m| m + 1).to_string();
                    PartitionInstance {
                        graph,
                        k: s.one("clusters", &implied)?,
                        ground_truth_labels: labels,
                    }
                }
                None => gen_gaussian_partition(
                    s.one("nodes", "60")?,
                    s.one("clusters", "3")?,
                    s.one("p_in", "0.5")?,
                    s.one("p_out", "0.02")?,
                    seed,
                )?,
            };
            let (dy, uniform) = partition_target(instance.k)?;
            let nu = match s.one::<String>("target_weights", "uniform")?.as_str() {
                "uniform" => uniform,
                "sizes" => {
                    let mut counts = vec![0.0; instance.k];
                    for &l in &instance.ground_truth_labels {
                        if l < instance.k {
                            counts[l] += 1.0;
                        }
                    }
                    let total: f64 = counts.iter().sum();
                    ProbabilityVector::new(counts.into_iter().map(|c| c / total).collect())?
                }
                other => {
                    return Err(CliError::Config(format!(
                        "target_weights must be 'uniform' or 'sizes', got '{other}'"
                    )))
                }
            };
            let dx = adjacency_distance(&instance.graph);
            let mu = ProbabilityVector::uniform(dx.size())?;
            let problem = Problem::new(dx, dy, mu, nu.clone())?;
            Ok(Seeded {
                seed,
                instance: Instance::Partition(instance, nu),
                problem,
            })
        }
        Task::Match2d => {
            let shape: Shape = s.one("shape", "cross")?;
            let angle: f64 = s.one("angle", "30")?;
            let source = sample_2d_shape(s.one("source_points", "30")?, shape, seed)?;
            let target = rotate_2d(
                &sample_2d_shape(s.one("target_points", "40")?, shape, seed.wrapping_add(100))?,
                angle.to_radians(),
            );
            let problem = Problem::uniform(euclidean_distance_matrix(&source), euclidean_distance_matrix(&target))?;
            Ok(Seeded {
                seed,
                instance: Instance::Match2d(source, target),
                problem,
            })
        }
    }
}

fn final_residual(problem: &Problem, report: &SolveReport) -> Option<f64> {
    if let Some(r) = report.last().and_then(|r| r.residual) {
        return Some(r);
    }
    match luo_tseng_residual(&problem.dx, &problem.dy, &report.final_coupling, &problem.mu, &problem.nu) {
        Ok(r) => Some(r),
        Err(e) => {
            warn!("residual not evaluated: {e}");
            None
        }
    }
}

fn run_cell(cell: &Seeded, config: &SolverConfig) -> gw_core::Result<CellOutput> {
    let start = Instant::now();
    let (report, accuracy, ami) = match &cell.instance {
        Instance::Align(inst) => {
            let out = run_alignment(inst, config)?;
            (out.report, Some(out.accuracy), None)
        }
        Instance::Partition(inst, nu) => {
            let out = run_partition(inst, config, Some(nu.clone()))?;
            (out.report, None, Some(out.ami))
        }
        Instance::Match2d(source, target) => (run_match2d(source, target, config)?.report, None, None),
    };
    let seconds = start.elapsed().as_secs_f64();
    let last = report
        .last()
        .cloned()
        .ok_or_else(|| gw_core::Error::InvalidInput("solver returned an empty trace".into()))?;
    Ok(CellOutput {
        objective: last.objective,
        accuracy,
        ami,
        entropy: coupling_entropy(&report.final_coupling).max(0.0),
        marginal_infeasibility: last.marginal_infeasibility,
        split_gap: last.split_gap,
        residual: final_residual(&cell.problem, &report),
        iterations: report.iterations_used,
        converged: report.converged,
        seconds,
        trace: report.trace,
        coupling: report.final_coupling,
    })
}

/// Runs every (seed, config) pair; rows come back in run-id order regardless
/// of the number of workers.
pub fn run_grid(task: Task, settings: &Settings, grid: &[SolverConfig], jobs: usize) -> CliResult<Vec<RunRow>> {
    let seeds: Vec<u64> = settings.list("seed", "0")?;
    let cells = seeds
        .iter()
        .map(|&seed| build(task, settings, seed))
        .collect::<CliResult<Vec<_>>>()?;
    let work: Vec<(usize, &Seeded, SolverConfig)> = cells
        .iter()
        .flat_map(|cell| grid.iter().map(move |cfg| (cell, cfg)))
        .enumerate()
        .map(|(id, (cell, cfg))| {
            let config = SolverConfig {
                seed: cell.seed,
                ..cfg.clone()
            };
            (id, cell, config)
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| {
        work.into_par_iter()
            .map(|(run_id, cell, config)| {
                let outcome = run_cell(cell, &config);
                RunRow {
                    run_id,
                    task,
                    seed: cell.seed,
                    config,
                    outcome,
                }
            })
            .collect()
    }))
}
