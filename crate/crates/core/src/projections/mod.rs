//! Projections onto the row polytope `C1 = {pi >= 0 : pi 1 = mu}`, the column
//! polytope `C2 = {pi >= 0 : pi^T 1 = nu}` and the transport polytope
//! `C1 ∩ C2`, in KL and Euclidean geometry, plus an exact discrete OT solver.
//!
//! Every routine sweeps rows before columns.

mod dykstra;
mod exact_ot;
mod kl;
mod simplex;
mod sinkhorn;

pub use dykstra::{dykstra_project, DYKSTRA_DEFAULT_MAX_SWEEPS, DYKSTRA_DEFAULT_TOL};
pub use exact_ot::{exact_ot, transport_cost};
pub use kl::kl_scale;
pub use simplex::{euclid_project, simplex_project};
pub use sinkhorn::{sinkhorn_project, sinkhorn_project_log, sinkhorn_project_warm, SinkhornResult, KERNEL_FLOOR};
