//! Bregman alternating projected gradient.
//!
//! Each sweep takes a mirror step from `w` and projects onto the row polytope
//! to get `pi`, then steps from `pi` and projects onto the column polytope to
//! get `w`. The exponent is `D_X w D_Y / rho` — the partial gradient of the
//! bilinear form in one block, hence no factor 2.

use ndarray::Array2;

use super::objective::sandwich;
use super::{initial_coupling, relative_change, Problem, Recorder};
use crate::config::{Algorithm, Geometry, SolveReport, SolverConfig};
use crate::error::{Axis, Error, Result};
use crate::projections::{euclid_project, kl_scale};
use crate::types::{Coupling, ProbabilityVector, SplitIterate};

/// Largest exponent accepted before `exp` is considered to overflow.
const MAX_EXPONENT: f64 = 700.0;

pub fn bapg_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    run(problem, config, initial_coupling(problem, config)?)
}

fn half_step(
    problem: &Problem,
    from: &Coupling,
    target: &ProbabilityVector,
    axis: Axis,
    config: &SolverConfig,
    iter: usize,
) -> Result<Coupling> {
    let step: Array2<f64> = sandwich(&problem.dx, from.view(), &problem.dy) / config.rho;
    match config.geometry {
        Geometry::Entropy => {
            let top = step.iter().cloned().fold(0.0, f64::max);
            if !(top <= MAX_EXPONENT) {
                return Err(Error::instability(
                    "bapg",
                    iter,
                    format!("exponent {top:.3e} exceeds {MAX_EXPONENT}; increase rho"),
                ));
            }
            let kernel = from.as_array() * &step.mapv(f64::exp);
            kl_scale(kernel.view(), target, axis).map_err(|e| match e {
                Error::NumericalInstability { detail, .. } => Error::instability("bapg", iter, detail),
                Error::ZeroSumLine { axis, index } => Error::instability(
                    "bapg",
                    iter,
                    format!("{axis} {index} vanished; increase rho"),
                ),
                other => other,
            })
        }
        Geometry::Quadratic => {
            let point = from.as_array() + &step;
            euclid_project(point.view(), target, axis)
        }
    }
}

pub(crate) fn run(problem: &Problem, config: &SolverConfig, init: Coupling) -> Result<SolveReport> {
    if init.shape() != problem.shape() {
        return Err(Error::mismatch("initial coupling rows", init.rows(), problem.shape().0));
    }
    if config.geometry == Geometry::Entropy && init.as_array().iter().any(|&x| x <= 0.0) {
        return Err(Error::Domain(
            "entropy-geometry BAPG needs a strictly positive initial coupling".into(),
        ));
    }
    let mut rec = Recorder::new(problem, config);
    let mut split = SplitIterate::new_unchecked(init.clone(), init);
    rec.split(0, &split, f64::INFINITY, config.rho, config.geometry)?;
    let mut converged = false;
    let mut iters = 0;
    for k in 1..=config.max_iters {
        iters = k;
        let pi = half_step(problem, &split.w, &problem.mu, Axis::Rows, config, k)?;
        let w = half_step(problem, &pi, &problem.nu, Axis::Cols, config, k)?;
        let change = relative_change(w.view(), split.w.view());
        split = SplitIterate::new_unchecked(pi, w);
        rec.split(k, &split, change, config.rho, config.geometry)?;
        if change <= config.rel_tol {
            converged = true;
            break;
        }
    }
    Ok(SolveReport {
        algorithm: Algorithm::Bapg,
        final_coupling: split.averaged(),
        split: Some(split),
        trace: rec.records,
        converged,
        iterations_used: iters,
        phase_switch: None,
    })
}
