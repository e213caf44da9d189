//! Shared fixtures for the criterion benchmarks in `benches/`.

use gw_core::solvers::Problem;
use gw_core::tasks::{euclidean_distance_matrix, rotate_2d, sample_2d_shape, Shape};
use gw_core::{Algorithm, SolverConfig};

/// Point-cloud matching instance of size `n x n`: a Gaussian blob and a
/// rotated resample of it, uniform marginals.
pub fn blob_problem(n: usize, seed: u64) -> Problem {
    let source = sample_2d_shape(n, Shape::Blob, seed).expect("n > 0");
    let target = rotate_2d(&sample_2d_shape(n, Shape::Blob, seed + 1).expect("n > 0"), 0.5);
    Problem::uniform(euclidean_distance_matrix(&source), euclidean_distance_matrix(&target))
        .expect("valid distance matrices")
}

/// Runs exactly `iters` outer iterations (the stopping tolerance is set out of
/// reach) so timings compare per-iteration cost.
pub fn fixed_iteration_config(algorithm: Algorithm, iters: usize) -> SolverConfig {
    SolverConfig {
        algorithm,
        rel_tol: f64::MIN_POSITIVE,
        max_iters: iters,
        switch_iters: iters / 2,
        step: 0.5,
        ..SolverConfig::default()
    }
}
