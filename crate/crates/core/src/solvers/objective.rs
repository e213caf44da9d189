//! GW objective `f(pi) = -Tr(D_X pi D_Y pi^T)`, its gradient, the bilinear
//! split form and the BAPG potential.

use ndarray::{Array2, ArrayView2};

use crate::config::Geometry;
use crate::error::{Error, Result};
use crate::types::{Coupling, DistanceMatrix, SplitIterate};

/// `D_X pi D_Y`, evaluated left to right.
pub(crate) fn sandwich(dx: &DistanceMatrix, pi: ArrayView2<'_, f64>, dy: &DistanceMatrix) -> Array2<f64> {
    dx.as_array().dot(&pi).dot(dy.as_array())
}

pub(crate) fn frobenius_inner(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub(crate) fn frobenius_norm(a: ArrayView2<'_, f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `-Tr(D_X a D_Y b^T)` for arbitrary same-shaped matrices.
pub(crate) fn bilinear_raw(
    dx: &DistanceMatrix,
    dy: &DistanceMatrix,
    a: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
) -> f64 {
    -frobenius_inner(sandwich(dx, a, dy).view(), b)
}

fn check_dims(dx: &DistanceMatrix, dy: &DistanceMatrix, shape: (usize, usize)) -> Result<()> {
    if dx.size() != shape.0 {
        return Err(Error::mismatch("D_X size vs coupling rows", dx.size(), shape.0));
    }
    if dy.size() != shape.1 {
        return Err(Error::mismatch("D_Y size vs coupling columns", dy.size(), shape.1));
    }
    Ok(())
}

pub fn gw_objective(dx: &DistanceMatrix, dy: &DistanceMatrix, pi: &Coupling) -> Result<f64> {
    check_dims(dx, dy, pi.shape())?;
    Ok(bilinear_raw(dx, dy, pi.view(), pi.view()))
}

/// `∇f(pi) = -2 D_X pi D_Y` (both distance matrices are symmetric).
pub fn gw_gradient(dx: &DistanceMatrix, dy: &DistanceMatrix, pi: &Coupling) -> Result<Array2<f64>> {
    check_dims(dx, dy, pi.shape())?;
    Ok(gradient_raw(dx, dy, pi.view()))
}

pub(crate) fn gradient_raw(dx: &DistanceMatrix, dy: &DistanceMatrix, pi: ArrayView2<'_, f64>) -> Array2<f64> {
    sandwich(dx, pi, dy) * -2.0
}

/// `f(pi, w) = -Tr(D_X pi D_Y w^T)`.
pub fn bilinear_value(
    dx: &DistanceMatrix,
    dy: &DistanceMatrix,
    pi: ArrayView2<'_, f64>,
    w: ArrayView2<'_, f64>,
) -> Result<f64> {
    if pi.dim() != w.dim() {
        return Err(Error::mismatch("bilinear argument rows", pi.nrows(), w.nrows()));
    }
    check_dims(dx, dy, pi.dim())?;
    Ok(bilinear_raw(dx, dy, pi, w))
}

/// Bregman divergence `D_h(a, b)`.
///
/// KL: `sum a log(a/b) - a + b`, strictly positive entries required.
/// Quadratic: `||a - b||_F^2 / 2`.
pub fn bregman_divergence(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>, geometry: Geometry) -> Result<f64> {
    match geometry {
        Geometry::Quadratic => Ok(0.5 * a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum::<f64>()),
        Geometry::Entropy => {
            let mut total = 0.0;
            for (x, y) in a.iter().zip(b.iter()) {
                if *x <= 0.0 || *y <= 0.0 {
                    return Err(Error::Domain(
                        "KL divergence needs strictly positive entries".into(),
                    ));
                }
                total += x * (x / y).ln() - x + y;
            }
            Ok(total)
        }
    }
}

/// BAPG potential `F_rho(pi, w) = f(pi, w) + rho D_h(pi, w)`; the indicator
/// terms vanish because a [`SplitIterate`] satisfies both constraints.
pub fn penalty_value(
    dx: &DistanceMatrix,
    dy: &DistanceMatrix,
    iter: &SplitIterate,
    rho: f64,
    geometry: Geometry,
) -> Result<f64> {
    let f = bilinear_value(dx, dy, iter.pi().view(), iter.w().view())?;
    Ok(f + rho * bregman_divergence(iter.pi().view(), iter.w().view(), geometry)?)
}
