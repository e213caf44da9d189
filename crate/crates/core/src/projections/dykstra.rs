use ndarray::{Array2, ArrayView2};

use crate::error::{Axis, Error, Result};
use crate::projections::euclid_project;
use crate::types::{max_abs_diff, Coupling, ProbabilityVector};

pub const DYKSTRA_DEFAULT_TOL: f64 = 1e-8;
pub const DYKSTRA_DEFAULT_MAX_SWEEPS: usize = 10_000;

/// Euclidean projection onto the transport polytope by Dykstra's alternating
/// projections between `C1` and `C2` with correction terms.
///
/// Stops once the row violation of the (column-exact) iterate and the sweep
/// to sweep change are both within `tol` in the infinity norm.
pub fn dykstra_project(
    pi: ArrayView2<'_, f64>,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
    tol: f64,
    max_iters: usize,
) -> Result<Coupling> {
    if pi.nrows() != mu.len() {
        return Err(Error::mismatch("rows vs mu length", pi.nrows(), mu.len()));
    }
    if pi.ncols() != nu.len() {
        return Err(Error::mismatch("columns vs nu length", pi.ncols(), nu.len()));
    }
    if pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("Dykstra input must be finite".into()));
    }
    let mut x: Array2<f64> = pi.to_owned();
    let mut p = Array2::<f64>::zeros(x.dim());
    let mut q = Array2::<f64>::zeros(x.dim());
    let mut violation = f64::INFINITY;
    for _ in 0..max_iters {
        let shifted = &x + &p;
        let y = euclid_project(shifted.view(), mu, Axis::Rows)?.into_array();
        p = shifted - &y;
        let shifted = &y + &q;
        let next = euclid_project(shifted.view(), nu, Axis::Cols)?;
        q = shifted - next.as_array();
        let change = next
            .as_array()
            .iter()
            .zip(x.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        violation = max_abs_diff(&next.row_sums(), mu.as_array());
        x = next.into_array();
        if violation <= tol && change <= tol {
            return Ok(Coupling::from_array_unchecked(x));
        }
    }
    Err(Error::NotConverged {
        context: "dykstra".into(),
        iterations: max_iters,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::product_coupling;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn feasible_input_unchanged() {
        let mu = ProbabilityVector::new(vec![0.2, 0.8]).unwrap();
        let nu = ProbabilityVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        let p = product_coupling(&mu, &nu);
        let out = dykstra_project(p.view(), &mu, &nu, 1e-12, 100).unwrap();
        assert!(out.as_array().iter().zip(p.as_array().iter()).all(|(a, b)| (a - b).abs() <= 1e-12));

        // marginal-preserving perturbation
        let mut bumped = p.as_array().clone();
        bumped[[0, 0]] += 0.05;
        bumped[[0, 1]] -= 0.05;
        bumped[[1, 0]] -= 0.05;
        bumped[[1, 1]] += 0.05;
        let out = dykstra_project(bumped.view(), &mu, &nu, 1e-12, 100).unwrap();
        assert!(out.as_array().iter().zip(bumped.iter()).all(|(a, b)| (a - b).abs() <= 1e-12));
    }

    /// Brute force over the 2x2 uniform polytope, parametrized as
    /// `[[a, 1/2 - a], [1/2 - a, a]]` with `a` in `[0, 1/2]`.
    fn brute_force_2x2(target: &Array2<f64>) -> Array2<f64> {
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=500_000 {
            let a = 0.5 * k as f64 / 500_000.0;
            let cand = array![[a, 0.5 - a], [0.5 - a, a]];
            let d = (&cand - target).mapv(|v| v * v).sum();
            if d < best.0 {
                best = (d, a);
            }
        }
        let a = best.1;
        array![[a, 0.5 - a], [0.5 - a, a]]
    }

    #[test]
    fn matches_brute_force_on_2x2() {
        let u = ProbabilityVector::uniform(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cases = vec![array![[1.0, 0.0], [0.0, 0.0]]];
        for _ in 0..5 {
            cases.push(Array2::from_shape_fn((2, 2), |_| rng.random_range(-0.5..1.0)));
        }
        for c in cases {
            let fast = dykstra_project(c.view(), &u, &u, 1e-12, 10_000).unwrap();
            let slow = brute_force_2x2(&c);
            let diff = (fast.as_array() - &slow).mapv(f64::abs).fold(0.0, |a: f64, &b| a.max(b));
            assert!(diff <= 2e-6, "{c:?}: {:?} vs {slow:?}", fast.as_array());
        }
        let out = dykstra_project(array![[1.0, 0.0], [0.0, 0.0]].view(), &u, &u, 1e-12, 10_000).unwrap();
        assert!((out.as_array()[[0, 0]] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn output_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mu = ProbabilityVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let nu = ProbabilityVector::uniform(5).unwrap();
        for _ in 0..10 {
            let x = Array2::from_shape_fn((4, 5), |_| rng.random_range(-1.0..1.0));
            let out = dykstra_project(x.view(), &mu, &nu, 1e-10, 10_000).unwrap();
            assert!(max_abs_diff(&out.row_sums(), mu.as_array()) <= 1e-10);
            assert!(max_abs_diff(&out.col_sums(), nu.as_array()) <= 1e-12);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let u = ProbabilityVector::uniform(3).unwrap();
        let x = array![[5.0, -1.0, 0.0], [0.0, 0.0, 3.0], [1.0, 1.0, 1.0]];
        let err = dykstra_project(x.view(), &u, &u, 1e-14, 1).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. }));
    }
}
