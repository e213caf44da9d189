//! Entropic proximal scheme: each outer iteration solves an entropic OT
//! problem whose cost is the current GW gradient.

use super::objective::sandwich;
use super::{at_outer_iteration, initial_coupling, relative_change, shift_rows_to_max, Problem, Recorder};
use crate::config::{Algorithm, SolveReport, SolverConfig};
use crate::error::{Error, Result};
use crate::projections::{sinkhorn_project, sinkhorn_project_log, KERNEL_FLOOR};
use crate::types::Coupling;

const HINT: &str = "increase epsilon_reg or enable the log-domain solver";

pub fn ebpg_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    run(problem, config, initial_coupling(problem, config)?)
}

/// `argmin <∇f(pi), x> + eps sum x (log x - 1)` over the polytope, via
/// Sinkhorn on `exp(-∇f/eps) = exp(2 D_X pi D_Y / eps)`.
fn step(problem: &Problem, pi: &Coupling, config: &SolverConfig, iter: usize) -> Result<Coupling> {
    let log_kernel = sandwich(&problem.dx, pi.view(), &problem.dy) * (2.0 / config.epsilon_reg);
    if log_kernel.iter().any(|x| !x.is_finite()) {
        return Err(Error::instability("ebpg", iter, format!("cost is not finite; {HINT}")));
    }
    let result = if config.log_domain {
        sinkhorn_project_log(log_kernel.view(), &problem.mu, &problem.nu, config.inner_tol, config.inner_iters)
    } else {
        let kernel = shift_rows_to_max(log_kernel).mapv(f64::exp);
        let (n, m) = kernel.dim();
        let dead_col = (0..m).find(|&j| (0..n).all(|i| kernel[[i, j]] < KERNEL_FLOOR));
        if let Some(j) = dead_col {
            return Err(Error::instability(
                "ebpg",
                iter,
                format!("kernel column {j} underflowed to zero; {HINT}"),
            ));
        }
        sinkhorn_project(kernel.view(), &problem.mu, &problem.nu, config.inner_tol, config.inner_iters)
    };
    Ok(result.map_err(|e| at_outer_iteration(e, "ebpg", iter, HINT))?.coupling)
}

pub(crate) fn run(problem: &Problem, config: &SolverConfig, init: Coupling) -> Result<SolveReport> {
    if init.shape() != problem.shape() {
        return Err(Error::mismatch("initial coupling rows", init.rows(), problem.shape().0));
    }
    let mut rec = Recorder::new(problem, config);
    let mut pi = init;
    rec.feasible(0, &pi, f64::INFINITY)?;
    let mut converged = false;
    let mut iters = 0;
    for k in 1..=config.max_iters {
        iters = k;
        let next = step(problem, &pi, config, k)?;
        let change = relative_change(next.view(), pi.view());
        pi = next;
        rec.feasible(k, &pi, change)?;
        if change <= config.rel_tol {
            converged = true;
            break;
        }
    }
    Ok(SolveReport {
        algorithm: Algorithm::Ebpg,
        final_coupling: pi,
        split: None,
        trace: rec.records,
        converged,
        iterations_used: iters,
        phase_switch: None,
    })
}
