//! Toy 2D point clouds for the shape-matching experiment.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::DistanceMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud2D {
    points: Vec<(f64, f64)>,
}

impl PointCloud2D {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point cloud must not be empty".into()));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidInput("point coordinates must be finite".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// A cross with arms of different lengths, so no rotation or reflection
    /// maps it onto itself.
    Cross,
    Ring,
    Blob,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Cross => "cross",
            Shape::Ring => "ring",
            Shape::Blob => "blob",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cross" => Ok(Shape::Cross),
            "ring" => Ok(Shape::Ring),
            "blob" => Ok(Shape::Blob),
            other => Err(Error::InvalidInput(format!("unknown shape '{other}'"))),
        }
    }
}

/// Cross arms as `(x0, x1, y0, y1)` boxes: long right arm, short left arm,
/// tall top, stubby bottom.
const CROSS_ARMS: [(f64, f64, f64, f64); 4] = [
    (0.1, 1.6, -0.1, 0.1),
    (-0.7, -0.1, -0.1, 0.1),
    (-0.1, 0.1, 0.1, 1.1),
    (-0.1, 0.1, -0.4, 0.1),
];

pub fn sample_2d_shape(n: usize, shape: Shape, seed: u64) -> Result<PointCloud2D> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match shape {
        Shape::Cross => {
            let areas: Vec<f64> = CROSS_ARMS.iter().map(|(a, b, c, d)| (b - a) * (d - c)).collect();
            let total: f64 = areas.iter().sum();
            (0..n)
                .map(|_| {
                    let mut r = rng.random::<f64>() * total;
                    let mut arm = CROSS_ARMS.len() - 1;
                    for (i, a) in areas.iter().enumerate() {
                        if r < *a {
                            arm = i;
                            break;
                        }
                        r -= a;
                    }
                    let (x0, x1, y0, y1) = CROSS_ARMS[arm];
                    (rng.random_range(x0..x1), rng.random_range(y0..y1))
                })
                .collect()
        }
        Shape::Ring => (0..n)
            .map(|_| {
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                let noise: f64 = StandardNormal.sample(&mut rng);
                let r = 1.0 + 0.05 * noise;
                (r * theta.cos(), r * theta.sin())
            })
            .collect(),
        Shape::Blob => (0..n)
            .map(|_| {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                (x, 0.5 * y)
            })
            .collect(),
    };
    PointCloud2D::new(points)
}

pub fn rotate_2d(p: &PointCloud2D, theta: f64) -> PointCloud2D {
    let (s, c) = theta.sin_cos();
    PointCloud2D {
        points: p.points.iter().map(|&(x, y)| (c * x - s * y, s * x + c * y)).collect(),
    }
}

pub fn euclidean_distance_matrix(p: &PointCloud2D) -> DistanceMatrix {
    let pts = &p.points;
    let d = Array2::from_shape_fn((pts.len(), pts.len()), |(i, j)| {
        (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1)
    });
    DistanceMatrix::new(d).expect("distances are finite and nonnegative")
}
