use ndarray::Array1;

use crate::types::DistanceMatrix;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 10_000;

/// Largest singular value of a symmetric matrix by power iteration on `D^2`.
pub fn spectral_norm(d: &DistanceMatrix) -> f64 {
    let a = d.as_array();
    let n = d.size();
    // Non-constant start so it is not orthogonal to the top eigenvector of
    // the usual symmetric test matrices.
    let mut v = Array1::from_shape_fn(n, |i| 1.0 + (i as f64 + 1.0).sqrt() * 0.1);
    let norm = v.dot(&v).sqrt();
    v /= norm;
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = a.dot(&a.dot(&v));
        let next = v.dot(&w);
        let wn = w.dot(&w).sqrt();
        if wn == 0.0 {
            return 0.0;
        }
        v = w / wn;
        let done = (next - lambda).abs() <= POWER_TOL * next.abs().max(f64::MIN_POSITIVE);
        lambda = next;
        if done {
            break;
        }
    }
    lambda.max(0.0).sqrt()
}

/// `L_f = sigma_max(D_X) sigma_max(D_Y)`, the gradient Lipschitz modulus
/// used to bound the BPG step.
pub fn lipschitz_bound(dx: &DistanceMatrix, dy: &DistanceMatrix) -> f64 {
    spectral_norm(dx) * spectral_norm(dy)
}
