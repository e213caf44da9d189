//! The five GW solvers and the objective pieces they share.
//!
//! All solvers start from the product coupling `mu nu^T` (optionally jittered
//! by a seeded multiplicative perturbation) and stop when the relative
//! Frobenius change of the iterate drops to `rel_tol` or `max_iters` is hit.

mod bapg;
mod bpg;
mod ebpg;
mod fw;
mod hbpg;
mod lipschitz;
pub(crate) mod objective;

use std::time::Instant;

use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bapg::bapg_solve;
pub use bpg::bpg_solve;
pub use ebpg::ebpg_solve;
pub use fw::fw_solve;
pub use hbpg::hbpg_solve;
pub use lipschitz::{lipschitz_bound, spectral_norm};
pub use objective::{bilinear_value, bregman_divergence, gw_gradient, gw_objective, penalty_value};

use crate::config::{Algorithm, Geometry, IterationRecord, SolveReport, SolverConfig};
use crate::diagnostics::{luo_tseng_residual, marginal_infeasibility, split_gap};
use crate::error::{Error, Result};
use crate::projections::sinkhorn_project;
use crate::types::{
    max_abs_diff, product_coupling, validate_inputs, Coupling, DistanceMatrix, ProbabilityVector,
    SplitIterate,
};
use objective::frobenius_norm;

/// A validated GW instance.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dx: DistanceMatrix,
    pub dy: DistanceMatrix,
    pub mu: ProbabilityVector,
    pub nu: ProbabilityVector,
}

impl Problem {
    pub fn new(
        dx: DistanceMatrix,
        dy: DistanceMatrix,
        mu: ProbabilityVector,
        nu: ProbabilityVector,
    ) -> Result<Self> {
        validate_inputs(&dx, &dy, &mu, &nu)?;
        Ok(Self { dx, dy, mu, nu })
    }

    /// Uniform marginals on both sides.
    pub fn uniform(dx: DistanceMatrix, dy: DistanceMatrix) -> Result<Self> {
        let mu = ProbabilityVector::uniform(dx.size())?;
        let nu = ProbabilityVector::uniform(dy.size())?;
        Self::new(dx, dy, mu, nu)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.mu.len(), self.nu.len())
    }
}

/// Runs the solver selected by `config.algorithm`.
pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport> {
    let init = initial_coupling(problem, config)?;
    solve_from(problem, config, init)
}

/// Like [`solve`] but from a caller-supplied starting coupling. BAPG uses it
/// for both halves, so it should be feasible for both marginals.
pub fn solve_from(problem: &Problem, config: &SolverConfig, init: Coupling) -> Result<SolveReport> {
    config.validate()?;
    match config.algorithm {
        Algorithm::Bapg => bapg::run(problem, config, init),
        Algorithm::Bpg => bpg::run(problem, config, init),
        Algorithm::Ebpg => ebpg::run(problem, config, init),
        Algorithm::Hbpg => hbpg::run(problem, config, init),
        Algorithm::Fw => fw::run(problem, config, init),
    }
}

/// Product coupling, or its seeded jitter projected back onto the transport
/// polytope when `config.init_jitter > 0`.
pub fn initial_coupling(problem: &Problem, config: &SolverConfig) -> Result<Coupling> {
    let base = product_coupling(&problem.mu, &problem.nu);
    if config.init_jitter == 0.0 {
        return Ok(base);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let amp = config.init_jitter;
    let kernel = base
        .as_array()
        .mapv(|p| p * (amp * rng.random_range(-1.0..1.0)).exp());
    Ok(sinkhorn_project(kernel.view(), &problem.mu, &problem.nu, 1e-14, 100_000)?.coupling)
}

pub(crate) fn relative_change(new: ArrayView2<'_, f64>, old: ArrayView2<'_, f64>) -> f64 {
    let diff: Array2<f64> = &new - &old;
    let base = frobenius_norm(old);
    if base == 0.0 {
        frobenius_norm(diff.view())
    } else {
        frobenius_norm(diff.view()) / base
    }
}

/// Rewrites a Sinkhorn failure so it reports the outer iteration that
/// triggered it.
pub(crate) fn at_outer_iteration(err: Error, context: &str, iter: usize, hint: &str) -> Error {
    match err {
        Error::NumericalInstability { iteration, detail, .. } => Error::instability(
            context,
            iter,
            format!("inner sweep {iteration}: {detail}; {hint}"),
        ),
        other => other,
    }
}

/// Subtracts each row's maximum. Row scalings are absorbed by the Sinkhorn
/// projection onto the transport polytope, so this changes nothing but the
/// floating-point range of `exp`.
pub(crate) fn shift_rows_to_max(mut a: Array2<f64>) -> Array2<f64> {
    for mut row in a.rows_mut() {
        let top = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top.is_finite() {
            row.mapv_inplace(|x| x - top);
        }
    }
    a
}

pub(crate) fn own_violation(pi: &Coupling, problem: &Problem) -> f64 {
    max_abs_diff(&pi.row_sums(), problem.mu.as_array()) + max_abs_diff(&pi.col_sums(), problem.nu.as_array())
}

/// Builds the per-iteration trace.
pub(crate) struct Recorder<'a> {
    problem: &'a Problem,
    track_residual: bool,
    start: Instant,
    pub(crate) records: Vec<IterationRecord>,
}

impl<'a> Recorder<'a> {
    pub(crate) fn new(problem: &'a Problem, config: &SolverConfig) -> Self {
        Self {
            problem,
            track_residual: config.track_residual,
            start: Instant::now(),
            records: Vec::new(),
        }
    }

    fn residual(&self, pi: &Coupling) -> Option<f64> {
        if !self.track_residual {
            return None;
        }
        let p = self.problem;
        match luo_tseng_residual(&p.dx, &p.dy, pi, &p.mu, &p.nu) {
            Ok(r) => Some(r),
            Err(e) => {
                log::debug!("residual unavailable: {e}");
                None
            }
        }
    }

    pub(crate) fn feasible(&mut self, iter: usize, pi: &Coupling, rel_change: f64) -> Result<()> {
        let p = self.problem;
        self.records.push(IterationRecord {
            iter,
            objective: gw_objective(&p.dx, &p.dy, pi)?,
            marginal_infeasibility: marginal_infeasibility(pi, &p.mu, &p.nu)?,
            split_gap: 0.0,
            constraint_violation: own_violation(pi, p),
            potential: None,
            residual: self.residual(pi),
            rel_change,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
        });
        Ok(())
    }

    pub(crate) fn split(
        &mut self,
        iter: usize,
        split: &SplitIterate,
        rel_change: f64,
        rho: f64,
        geometry: Geometry,
    ) -> Result<()> {
        let p = self.problem;
        let avg = split.averaged();
        let violation = max_abs_diff(&split.pi().row_sums(), p.mu.as_array())
            + max_abs_diff(&split.w().col_sums(), p.nu.as_array());
        self.records.push(IterationRecord {
            iter,
            objective: gw_objective(&p.dx, &p.dy, &avg)?,
            marginal_infeasibility: marginal_infeasibility(&avg, &p.mu, &p.nu)?,
            split_gap: split_gap(split),
            constraint_violation: violation,
            potential: penalty_value(&p.dx, &p.dy, split, rho, geometry).ok(),
            residual: self.residual(&avg),
            rel_change,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
        });
        Ok(())
    }
}
