use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis as NdAxis};

use crate::error::{Error, Result};
use crate::types::{Coupling, ProbabilityVector};

/// Kernel entries are clamped from below to this value before scaling.
pub const KERNEL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct SinkhornResult {
    pub coupling: Coupling,
    /// Full row+column sweeps performed.
    pub iterations: usize,
    /// Row-sum violation in the infinity norm after the last sweep (column
    /// sums are exact after each sweep).
    pub marginal_error: f64,
    pub converged: bool,
    /// `ln v` for the final column scaling, usable as a warm start.
    pub log_column_scaling: Array1<f64>,
}

/// KL projection of a positive kernel onto the transport polytope by
/// alternating row and column scaling.
///
/// Returns `diag(u) K diag(v)`. Hitting `max_iters` is not an error: the last
/// iterate comes back with `converged = false`. Non-finite scalings abort
/// with [`Error::NumericalInstability`].
pub fn sinkhorn_project(
    kernel: ArrayView2<'_, f64>,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
    tol: f64,
    max_iters: usize,
) -> Result<SinkhornResult> {
    sinkhorn_project_warm(kernel, mu, nu, tol, max_iters, None)
}

/// [`sinkhorn_project`] with the column scaling initialised to
/// `exp(log_v0)` instead of ones. The limit is the same; a good guess only
/// shortens the way there.
pub fn sinkhorn_project_warm(
    kernel: ArrayView2<'_, f64>,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
    tol: f64,
    max_iters: usize,
    log_v0: Option<ArrayView1<'_, f64>>,
) -> Result<SinkhornResult> {
    check_shape(kernel.dim(), mu, nu)?;
    if kernel.iter().any(|v| v.is_nan() || *v < 0.0) {
        return Err(Error::InvalidInput("Sinkhorn kernel must be nonnegative".into()));
    }
    let k: Array2<f64> = kernel.mapv(|v| v.max(KERNEL_FLOOR));
    let mu_a = mu.as_array();
    let nu_a = nu.as_array();
    let mut u = Array1::<f64>::ones(mu.len());
    let mut v = match log_v0 {
        Some(lv) if lv.len() == nu.len() => {
            let guess = lv.mapv(f64::exp);
            if guess.iter().all(|x| x.is_finite() && *x > 0.0) {
                guess
            } else {
                Array1::ones(nu.len())
            }
        }
        _ => Array1::ones(nu.len()),
    };
    let mut err = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < max_iters.max(1) {
        sweeps += 1;
        let kv = k.dot(&v);
        u = mu_a / &kv;
        let ktu = k.t().dot(&u);
        v = nu_a / &ktu;
        if !u.iter().chain(v.iter()).all(|x| x.is_finite() && *x > 0.0) {
            return Err(Error::instability(
                "sinkhorn",
                sweeps,
                "scaling vector overflowed or vanished",
            ));
        }
        let rows = &u * &k.dot(&v);
        err = rows
            .iter()
            .zip(mu_a.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if !err.is_finite() {
            return Err(Error::instability("sinkhorn", sweeps, "marginal error is not finite"));
        }
        if err <= tol {
            break;
        }
    }
    let mut plan = k;
    scale_in_place(&mut plan, &u, &v);
    if plan.iter().any(|x| !x.is_finite()) {
        return Err(Error::instability("sinkhorn", sweeps, "coupling overflowed"));
    }
    Ok(SinkhornResult {
        coupling: Coupling::from_array_unchecked(plan),
        iterations: sweeps,
        marginal_error: err,
        converged: err <= tol,
        log_column_scaling: v.mapv(f64::ln),
    })
}

/// Log-domain variant taking `log K` directly; stable when the kernel's
/// dynamic range exceeds `f64`.
pub fn sinkhorn_project_log(
    log_kernel: ArrayView2<'_, f64>,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
    tol: f64,
    max_iters: usize,
) -> Result<SinkhornResult> {
    check_shape(log_kernel.dim(), mu, nu)?;
    if log_kernel.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::InvalidInput("log kernel must be < +inf and not NaN".into()));
    }
    let (n, m) = log_kernel.dim();
    let log_mu = mu.as_array().mapv(f64::ln);
    let log_nu = nu.as_array().mapv(f64::ln);
    let mut f = Array1::<f64>::zeros(n);
    let mut g = Array1::<f64>::zeros(m);
    let mut err = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < max_iters.max(1) {
        sweeps += 1;
        for i in 0..n {
            f[i] = log_mu[i] - logsumexp((0..m).map(|j| log_kernel[[i, j]] + g[j]));
        }
        for j in 0..m {
            g[j] = log_nu[j] - logsumexp((0..n).map(|i| log_kernel[[i, j]] + f[i]));
        }
        if !f.iter().chain(g.iter()).all(|x| x.is_finite()) {
            return Err(Error::instability("sinkhorn_log", sweeps, "potential is not finite"));
        }
        err = (0..n)
            .map(|i| {
                let row: f64 = (0..m).map(|j| (log_kernel[[i, j]] + f[i] + g[j]).exp()).sum();
                (row - mu.as_array()[i]).abs()
            })
            .fold(0.0, f64::max);
        if err <= tol {
            break;
        }
    }
    let plan = Array2::from_shape_fn((n, m), |(i, j)| (log_kernel[[i, j]] + f[i] + g[j]).exp());
    Ok(SinkhornResult {
        coupling: Coupling::from_array_unchecked(plan),
        iterations: sweeps,
        marginal_error: err,
        converged: err <= tol,
        log_column_scaling: g,
    })
}

fn logsumexp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn check_shape(dim: (usize, usize), mu: &ProbabilityVector, nu: &ProbabilityVector) -> Result<()> {
    if dim.0 != mu.len() {
        return Err(Error::mismatch("kernel rows vs mu length", dim.0, mu.len()));
    }
    if dim.1 != nu.len() {
        return Err(Error::mismatch("kernel columns vs nu length", dim.1, nu.len()));
    }
    Ok(())
}

fn scale_in_place(plan: &mut Array2<f64>, u: &Array1<f64>, v: &Array1<f64>) {
    for (mut row, &ui) in plan.axis_iter_mut(NdAxis(0)).zip(u.iter()) {
        for (x, &vj) in row.iter_mut().zip(v.iter()) {
            *x *= ui * vj;
        }
    }
}
