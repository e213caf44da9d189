//! Feasibility, split-gap, criticality residual and sharpness measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projections::{dykstra_project, DYKSTRA_DEFAULT_MAX_SWEEPS, DYKSTRA_DEFAULT_TOL};
use crate::solvers::objective::{frobenius_norm, gw_objective, sandwich};
use crate::types::{Coupling, DistanceMatrix, ProbabilityVector, SplitIterate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSummary {
    pub objective: f64,
    pub marginal_infeasibility: f64,
    pub split_gap: f64,
    pub residual: f64,
    /// Shannon entropy of the coupling, in nats.
    pub entropy: f64,
}

/// `||pi^T 1 - nu|| / m + ||pi 1 - mu|| / n` with Euclidean norms.
pub fn marginal_infeasibility(pi: &Coupling, mu: &ProbabilityVector, nu: &ProbabilityVector) -> Result<f64> {
    let (n, m) = pi.shape();
    if n != mu.len() {
        return Err(Error::mismatch("coupling rows vs mu length", n, mu.len()));
    }
    if m != nu.len() {
        return Err(Error::mismatch("coupling columns vs nu length", m, nu.len()));
    }
    let l2 = |a: ndarray::Array1<f64>, b: &ndarray::Array1<f64>| {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    };
    Ok(l2(pi.col_sums(), nu.as_array()) / m as f64 + l2(pi.row_sums(), mu.as_array()) / n as f64)
}

/// `||pi - w||_F`.
pub fn split_gap(iter: &SplitIterate) -> f64 {
    frobenius_norm((iter.pi().as_array() - iter.w().as_array()).view())
}

/// `||pi - Proj_{C1 ∩ C2}(pi + D_X pi D_Y)||_F` with the Euclidean projection.
pub fn luo_tseng_residual(
    dx: &DistanceMatrix,
    dy: &DistanceMatrix,
    pi: &Coupling,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
) -> Result<f64> {
    crate::types::validate_inputs(dx, dy, mu, nu)?;
    if pi.shape() != (mu.len(), nu.len()) {
        return Err(Error::mismatch("coupling rows vs mu length", pi.rows(), mu.len()));
    }
    let stepped = pi.as_array() + &sandwich(dx, pi.view(), dy);
    let projected = dykstra_project(stepped.view(), mu, nu, DYKSTRA_DEFAULT_TOL, DYKSTRA_DEFAULT_MAX_SWEEPS)?;
    Ok(frobenius_norm((pi.as_array() - projected.as_array()).view()))
}

/// `-sum pi log pi` over positive entries (`0 log 0 = 0`).
pub fn coupling_entropy(pi: &Coupling) -> f64 {
    -pi.as_array()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// All diagnostics at once; `split` supplies the BAPG halves when present.
pub fn summarize(
    dx: &DistanceMatrix,
    dy: &DistanceMatrix,
    pi: &Coupling,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
    split: Option<&SplitIterate>,
) -> Result<DiagnosticsSummary> {
    Ok(DiagnosticsSummary {
        objective: gw_objective(dx, dy, pi)?,
        marginal_infeasibility: marginal_infeasibility(pi, mu, nu)?,
        split_gap: split.map_or(0.0, split_gap),
        residual: luo_tseng_residual(dx, dy, pi, mu, nu)?,
        entropy: coupling_entropy(pi).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projections::exact_ot;
    use crate::types::product_coupling;
    use ndarray::{array, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn infeasibility_examples() {
        let u = ProbabilityVector::uniform(2).unwrap();
        let mu = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        assert!(marginal_infeasibility(&product_coupling(&mu, &u), &mu, &u).unwrap() <= 1e-12);
        let feasible = Coupling::new(array![[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert_eq!(marginal_infeasibility(&feasible, &u, &u).unwrap(), 0.0);

        // mass deficit; built from raw entries since the matrix is not a unit-mass coupling
        let deficit = Coupling::from_array_unchecked(array![[0.5, 0.0], [0.0, 0.25]]);
        let v = marginal_infeasibility(&deficit, &u, &u).unwrap();
        // independent evaluation: both residual vectors are [0, -0.25]
        let expected = (0.25f64.powi(2)).sqrt() / 2.0 + (0.25f64.powi(2)).sqrt() / 2.0;
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn split_gap_examples() {
        let u = ProbabilityVector::uniform(2).unwrap();
        let p = product_coupling(&u, &u);
        assert_eq!(split_gap(&SplitIterate::new(p.clone(), p.clone(), &u, &u).unwrap()), 0.0);

        let one = ProbabilityVector::new(vec![1.0]).unwrap();
        let nu = ProbabilityVector::new(vec![0.5, 0.2, 0.3]).unwrap();
        let pi = Coupling::new(array![[0.8, 0.2, 0.0]]).unwrap();
        let w = Coupling::new(array![[0.5, 0.2, 0.3]]).unwrap();
        let it = SplitIterate::new(pi, w, &one, &nu).unwrap();
        let oracle: f64 = [0.3f64, 0.0, -0.3].iter().map(|d| d * d).sum::<f64>().sqrt();
        assert!((split_gap(&it) - oracle).abs() < 1e-15);

        let it = SplitIterate::new_unchecked(
            Coupling::new(array![[0.8, 0.2]]).unwrap(),
            Coupling::new(array![[0.5, 0.5]]).unwrap(),
        );
        assert!((split_gap(&it) - (0.09f64 * 2.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_entry_difference() {
        let it = SplitIterate::new_unchecked(
            Coupling::from_array_unchecked(array![[0.3, 0.0], [0.0, 0.0]]),
            Coupling::from_array_unchecked(Array2::zeros((2, 2))),
        );
        assert!((split_gap(&it) - 0.3).abs() < 1e-16);
    }

    #[test]
    fn residual_examples() {
        let u = ProbabilityVector::uniform(3).unwrap();
        let z = DistanceMatrix::zeros(3);
        let p = product_coupling(&u, &u);
        assert!(luo_tseng_residual(&z, &z, &p, &u, &u).unwrap() <= 2e-8);

        let one = ProbabilityVector::new(vec![1.0]).unwrap();
        let d1 = DistanceMatrix::new(array![[5.0]]).unwrap();
        let c = Coupling::new(array![[1.0]]).unwrap();
        assert_eq!(luo_tseng_residual(&d1, &d1, &c, &one, &one).unwrap(), 0.0);
    }

    #[test]
    fn residual_vanishes_at_stationary_vertex() {
        // Perfect matching 0-1, 2-3; the identity coupling is the LMO vertex
        // for its own gradient and the gradient lies in its normal cone.
        let d = DistanceMatrix::new(array![
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0]
        ])
        .unwrap();
        let u = ProbabilityVector::uniform(4).unwrap();
        let start = Coupling::new(Array2::<f64>::eye(4) / 4.0).unwrap();
        let grad = crate::solvers::gw_gradient(&d, &d, &start).unwrap();
        let vertex = exact_ot(grad.view(), &u, &u).unwrap();
        assert_eq!(vertex, start);
        let r = luo_tseng_residual(&d, &d, &vertex, &u, &u).unwrap();
        assert!((0.0..=2e-8).contains(&r), "residual {r}");
    }

    #[test]
    fn residual_nonnegative_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dx = DistanceMatrix::new(Array2::from_shape_fn((3, 3), |_| rng.random_range(0.0..1.0))).unwrap();
        let dy = DistanceMatrix::new(Array2::from_shape_fn((4, 4), |_| rng.random_range(0.0..1.0))).unwrap();
        let mu = ProbabilityVector::uniform(3).unwrap();
        let nu = ProbabilityVector::uniform(4).unwrap();
        let raw = Array2::from_shape_fn((3, 4), |_| rng.random_range(0.0..1.0));
        let pi = Coupling::new(&raw / raw.sum()).unwrap();
        assert!(luo_tseng_residual(&dx, &dy, &pi, &mu, &nu).unwrap() > 0.0);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(coupling_entropy(&Coupling::new(array![[1.0, 0.0], [0.0, 0.0]]).unwrap()), 0.0);
        let uni = Coupling::new(array![[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!((coupling_entropy(&uni) - 4f64.ln()).abs() < 1e-15);
        assert!((coupling_entropy(&uni) - 1.3863).abs() < 1e-4);
        let two = Coupling::new(array![[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert!((coupling_entropy(&two) - 2f64.ln()).abs() < 1e-15);
    }
}
