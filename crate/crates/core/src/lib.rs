//! Gromov-Wasserstein solvers over discrete metric-measure spaces.
//!
//! The crate is organised bottom-up: [`types`] holds the validated matrices
//! and couplings, [`projections`] the KL/Euclidean projection and OT
//! primitives, [`solvers`] the five GW algorithms, [`diagnostics`] the
//! measurements used to check them and [`tasks`] the graph alignment,
//! partition and point-cloud pipelines.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod projections;
pub mod solvers;
pub mod tasks;
pub mod types;

#[cfg(test)]
mod test_support;

pub use config::{Algorithm, Geometry, IterationRecord, SolveReport, SolverConfig, EPSILON_REG_GRID};
pub use diagnostics::{
    coupling_entropy, luo_tseng_residual, marginal_infeasibility, split_gap, summarize,
    DiagnosticsSummary,
};
pub use error::{Axis, Error, Result};
pub use solvers::{
    bapg_solve, bpg_solve, ebpg_solve, fw_solve, gw_gradient, gw_objective, hbpg_solve,
    lipschitz_bound, solve, solve_from, Problem,
};
pub use types::{
    product_coupling, validate_inputs, Coupling, DistanceMatrix, Graph, ProbabilityVector,
    SplitIterate,
};
