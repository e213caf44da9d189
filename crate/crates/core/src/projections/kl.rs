use ndarray::{ArrayView2, Axis as NdAxis};

use crate::error::{Axis, Error, Result};
use crate::types::{Coupling, ProbabilityVector};

/// KL (negative-entropy Bregman) projection onto `C1` or `C2`.
///
/// Each row (resp. column) is rescaled so its sum equals the matching entry
/// of `target`: `diag(mu ./ pi 1) pi` or `pi diag(nu ./ pi^T 1)`.
pub fn kl_scale(pi: ArrayView2<'_, f64>, target: &ProbabilityVector, axis: Axis) -> Result<Coupling> {
    let (line_axis, len) = match axis {
        Axis::Rows => (NdAxis(0), pi.nrows()),
        Axis::Cols => (NdAxis(1), pi.ncols()),
    };
    if len != target.len() {
        return Err(Error::mismatch(format!("{axis} count vs target length"), len, target.len()));
    }
    let mut out = pi.to_owned();
    for (index, (mut line, &t)) in out
        .axis_iter_mut(line_axis)
        .zip(target.as_array().iter())
        .enumerate()
    {
        let s = line.sum();
        if !s.is_finite() {
            return Err(Error::instability(
                "kl_scale",
                0,
                format!("{axis} {index} sum is not finite"),
            ));
        }
        if s <= 0.0 {
            return Err(Error::ZeroSumLine { axis, index });
        }
        let scale = t / s;
        line.mapv_inplace(|v| v * scale);
    }
    Ok(Coupling::from_array_unchecked(out))
}
