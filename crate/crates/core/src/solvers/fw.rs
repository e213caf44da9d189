//! Frank-Wolfe with the exact OT solver as linear-minimization oracle and
//! exact line search on the quadratic objective.

use super::objective::{bilinear_raw, frobenius_inner, gradient_raw};
use super::{initial_coupling, relative_change, Problem, Recorder};
use crate::config::{Algorithm, SolveReport, SolverConfig};
use crate::error::{Error, Result};
use crate::projections::exact_ot;
use crate::types::Coupling;

pub fn fw_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    run(problem, config, initial_coupling(problem, config)?)
}

/// Minimizer over `[0, 1]` of `phi(g) = a g^2 + b g`. Ties and flat
/// directions keep the current point.
pub(crate) fn line_search(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        (-b / (2.0 * a)).clamp(0.0, 1.0)
    } else if a < 0.0 {
        if a + b < 0.0 {
            1.0
        } else {
            0.0
        }
    } else if b < 0.0 {
        1.0
    } else {
        0.0
    }
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
        let grad = gradient_raw(&problem.dx, &problem.dy, pi.view());
        let vertex = exact_ot(grad.view(), &problem.mu, &problem.nu)?;
        let d = vertex.as_array() - pi.as_array();
        let a = bilinear_raw(&problem.dx, &problem.dy, d.view(), d.view());
        let b = frobenius_inner(grad.view(), d.view());
        let gamma = line_search(a, b);
        let next = Coupling::from_array_unchecked(pi.as_array() + &(d * gamma));
        let change = relative_change(next.view(), pi.view());
        pi = next;
        rec.feasible(k, &pi, change)?;
        if change <= config.rel_tol {
            converged = true;
            break;
        }
    }
    Ok(SolveReport {
        algorithm: Algorithm::Fw,
        final_coupling: pi,
        split: None,
        trace: rec.records,
        converged,
        iterations_used: iters,
        phase_switch: None,
    })
}
