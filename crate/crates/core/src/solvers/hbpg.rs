//! Hybrid: an eBPG warm start for `switch_iters` iterations, then BPG with
//! whatever budget remains.

use super::{bpg, ebpg, initial_coupling, Problem};
use crate::config::{Algorithm, SolveReport, SolverConfig};
use crate::error::Result;
use crate::types::Coupling;

pub fn hbpg_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    run(problem, config, initial_coupling(problem, config)?)
}

pub(crate) fn run(problem: &Problem, config: &SolverConfig, init: Coupling) -> Result<SolveReport> {
    let phase1_budget = config.switch_iters.min(config.max_iters);
    if phase1_budget == 0 {
        let mut report = bpg::run(problem, config, init)?;
        report.algorithm = Algorithm::Hbpg;
        report.phase_switch = Some(0);
        return Ok(report);
    }
    let warm = ebpg::run(
        problem,
        &SolverConfig {
            max_iters: phase1_budget,
            ..config.clone()
        },
        init,
    )?;
    let used = warm.iterations_used;
    let remaining = config.max_iters - used;
    let mut trace = warm.trace;
    let switch_at = trace.len();
    if remaining == 0 {
        return Ok(SolveReport {
            algorithm: Algorithm::Hbpg,
            final_coupling: warm.final_coupling,
            split: None,
            trace,
            converged: warm.converged,
            iterations_used: used,
            phase_switch: Some(switch_at),
        });
    }
    let refine = bpg::run(
        problem,
        &SolverConfig {
            max_iters: remaining,
            ..config.clone()
        },
        warm.final_coupling,
    )?;
    let offset_time = trace.last().map_or(0.0, |r| r.elapsed_seconds);
    // The refinement's iteration-0 record repeats the warm start's last one.
    for mut r in refine.trace.into_iter().skip(1) {
        r.iter += used;
        r.elapsed_seconds += offset_time;
        trace.push(r);
    }
    Ok(SolveReport {
        algorithm: Algorithm::Hbpg,
        final_coupling: refine.final_coupling,
        split: None,
        trace,
        converged: refine.converged,
        iterations_used: used + refine.iterations_used,
        phase_switch: Some(switch_at),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{bpg_solve, ebpg_solve, gw_objective};
    use crate::test_support::random_problem;

    fn strip(report: &SolveReport) -> Vec<(usize, f64, f64)> {
        report.trace.iter().map(|r| (r.iter, r.objective, r.rel_change)).collect()
    }

    #[test]
    fn no_warm_start_equals_bpg() {
        let problem = random_problem(5, 5, 21);
        let mut c = SolverConfig::with_algorithm(Algorithm::Hbpg);
        c.switch_iters = 0;
        let h = hbpg_solve(&problem, &c).unwrap();
        let b = bpg_solve(&problem, &c).unwrap();
        assert_eq!(strip(&h), strip(&b));
        assert_eq!(h.final_coupling, b.final_coupling);
    }

    #[test]
    fn full_warm_start_equals_ebpg() {
        let problem = random_problem(5, 5, 22);
        let mut c = SolverConfig::with_algorithm(Algorithm::Hbpg);
        c.max_iters = 30;
        c.switch_iters = 30;
        c.rel_tol = 1e-300;
        let h = hbpg_solve(&problem, &c).unwrap();
        let e = ebpg_solve(&problem, &c).unwrap();
        assert_eq!(strip(&h), strip(&e));
        assert_eq!(h.final_coupling, e.final_coupling);
    }

    #[test]
    fn refinement_does_not_lose_to_warm_start() {
        for seed in 0..5 {
            let problem = random_problem(6, 6, 30 + seed);
            let c = SolverConfig::with_algorithm(Algorithm::Hbpg);
            let h = hbpg_solve(&problem, &c).unwrap();
            let e = ebpg_solve(&problem, &c).unwrap();
            let fh = gw_objective(&problem.dx, &problem.dy, &h.final_coupling).unwrap();
            let fe = gw_objective(&problem.dx, &problem.dy, &e.final_coupling).unwrap();
            assert!(fh <= fe + 1e-9, "seed {seed}: {fh} > {fe}");
            let iters: Vec<usize> = h.trace.iter().map(|r| r.iter).collect();
            assert!(iters.windows(2).all(|w| w[1] == w[0] + 1));
        }
    }
}
