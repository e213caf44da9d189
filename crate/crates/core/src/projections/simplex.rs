use ndarray::{ArrayView2, Axis as NdAxis};

use crate::error::{Axis, Error, Result};
use crate::types::{Coupling, ProbabilityVector};

/// Euclidean projection of `v` onto `{x >= 0 : sum x = s}` by the
/// sort-and-threshold rule.
pub fn simplex_project(v: &[f64], s: f64) -> Vec<f64> {
    debug_assert!(s > 0.0);
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - s) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Row-wise (resp. column-wise) Euclidean projection onto the scaled simplices
/// `{x >= 0 : sum x = target[i]}`.
pub fn euclid_project(pi: ArrayView2<'_, f64>, target: &ProbabilityVector, axis: Axis) -> Result<Coupling> {
    let (line_axis, len) = match axis {
        Axis::Rows => (NdAxis(0), pi.nrows()),
        Axis::Cols => (NdAxis(1), pi.ncols()),
    };
    if len != target.len() {
        return Err(Error::mismatch(format!("{axis} count vs target length"), len, target.len()));
    }
    let mut out = pi.to_owned();
    let mut buf = Vec::new();
    for (mut line, &t) in out.axis_iter_mut(line_axis).zip(target.as_array().iter()) {
        buf.clear();
        buf.extend(line.iter().copied());
        if buf.iter().any(|x| !x.is_finite()) {
            return Err(Error::instability("euclid_project", 0, "non-finite input"));
        }
        for (dst, src) in line.iter_mut().zip(simplex_project(&buf, t)) {
            *dst = src;
        }
    }
    Ok(Coupling::from_array_unchecked(out))
}
