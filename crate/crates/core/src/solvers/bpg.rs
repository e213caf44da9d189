//! Bregman proximal gradient over the transport polytope (BPG, and BPG-S
//! when the inner Sinkhorn loop is capped at one sweep).

use ndarray::Array1;

use super::objective::sandwich;
use super::{
    at_outer_iteration, initial_coupling, lipschitz_bound, relative_change, shift_rows_to_max,
    Problem, Recorder,
};
use crate::config::{Algorithm, SolveReport, SolverConfig};
use crate::error::{Error, Result};
use crate::projections::sinkhorn_project_warm;
use crate::types::Coupling;

pub fn bpg_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    run(problem, config, initial_coupling(problem, config)?)
}

/// One mirror step: `pi ⊙ exp(-t ∇f(pi))` with `∇f = -2 D_X pi D_Y`,
/// projected back onto the polytope.
///
/// Unless the inner loop is a single sweep (BPG-S), Sinkhorn starts from the
/// previous step's column scaling: near a fixed point every step needs about
/// the same correction, and a cold start on these high-dynamic-range
/// kernels converges very slowly.
fn step(
    problem: &Problem,
    pi: &Coupling,
    config: &SolverConfig,
    iter: usize,
    warm: &mut Option<Array1<f64>>,
) -> Result<Coupling> {
    let exponent = shift_rows_to_max(sandwich(&problem.dx, pi.view(), &problem.dy) * (2.0 * config.step));
    if exponent.iter().any(|x| !x.is_finite()) {
        return Err(Error::instability("bpg", iter, "gradient step is not finite; reduce the step"));
    }
    let kernel = pi.as_array() * &exponent.mapv(f64::exp);
    let guess = if config.inner_iters > 1 { warm.as_ref().map(|v| v.view()) } else { None };
    let projected = sinkhorn_project_warm(
        kernel.view(),
        &problem.mu,
        &problem.nu,
        config.inner_tol,
        config.inner_iters,
        guess,
    )
    .map_err(|e| at_outer_iteration(e, "bpg", iter, "reduce the step"))?;
    *warm = Some(projected.log_column_scaling);
    let mut next = projected.coupling;
    if config.perturbation > 0.0 {
        let eps = config.perturbation;
        let floor = eps / (next.rows() * next.cols()) as f64;
        next = Coupling::from_array_unchecked(next.into_array().mapv(|x| (1.0 - eps) * x + floor));
    }
    Ok(next)
}

pub(crate) fn run(problem: &Problem, config: &SolverConfig, init: Coupling) -> Result<SolveReport> {
    if init.shape() != problem.shape() {
        return Err(Error::mismatch("initial coupling rows", init.rows(), problem.shape().0));
    }
    let lf = lipschitz_bound(&problem.dx, &problem.dy);
    if config.step * lf > 1.0 {
        log::warn!(
            "BPG step {} exceeds 1/L = {:.4e} (lipschitz bound {lf:.4e}); descent is not guaranteed",
            config.step,
            1.0 / lf
        );
    }
    let mut rec = Recorder::new(problem, config);
    let mut pi = init;
    rec.feasible(0, &pi, f64::INFINITY)?;
    let mut converged = false;
    let mut iters = 0;
    let mut warm = None;
    for k in 1..=config.max_iters {
        iters = k;
        let next = step(problem, &pi, config, k, &mut warm)?;
        let change = relative_change(next.view(), pi.view());
        pi = next;
        rec.feasible(k, &pi, change)?;
        if change <= config.rel_tol {
            converged = true;
            break;
        }
    }
    Ok(SolveReport {
        algorithm: Algorithm::Bpg,
        final_coupling: pi,
        split: None,
        trace: rec.records,
        converged,
        iterations_used: iters,
        phase_switch: None,
    })
}
