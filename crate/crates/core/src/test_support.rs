use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::solvers::Problem;
use crate::types::{DistanceMatrix, ProbabilityVector};

/// Euclidean distances between `n` uniform points in the unit square.
pub(crate) fn random_distance(n: usize, rng: &mut ChaCha8Rng) -> DistanceMatrix {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let d = Array2::from_shape_fn((n, n), |(i, j)| {
        let (a, b) = (pts[i], pts[j]);
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    });
    DistanceMatrix::new(d).unwrap()
}

pub(crate) fn random_problem(n: usize, m: usize, seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dx = random_distance(n, &mut rng);
    let dy = random_distance(m, &mut rng);
    Problem::uniform(dx, dy).unwrap()
}

pub(crate) fn random_marginal(n: usize, rng: &mut ChaCha8Rng) -> ProbabilityVector {
    let w: Vec<f64> = (0..n).map(|_| 0.5 + rng.random::<f64>()).collect();
    let s: f64 = w.iter().sum();
    ProbabilityVector::new(w.into_iter().map(|x| x / s).collect()).unwrap()
}

pub(crate) fn zero_problem(n: usize, m: usize) -> Problem {
    Problem::uniform(DistanceMatrix::zeros(n), DistanceMatrix::zeros(m)).unwrap()
}
