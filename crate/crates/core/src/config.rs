//! Solver configuration and the per-run report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Coupling, SplitIterate};

/// Regularization values swept for eBPG; the best run is reported.
pub const EPSILON_REG_GRID: [f64; 3] = [0.1, 0.01, 0.001];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bapg,
    Bpg,
    Ebpg,
    Hbpg,
    Fw,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Bapg,
        Algorithm::Bpg,
        Algorithm::Ebpg,
        Algorithm::Hbpg,
        Algorithm::Fw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bapg => "bapg",
            Algorithm::Bpg => "bpg",
            Algorithm::Ebpg => "ebpg",
            Algorithm::Hbpg => "hbpg",
            Algorithm::Fw => "fw",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bapg" => Ok(Algorithm::Bapg),
            "bpg" => Ok(Algorithm::Bpg),
            "ebpg" => Ok(Algorithm::Ebpg),
            "hbpg" => Ok(Algorithm::Hbpg),
            "fw" => Ok(Algorithm::Fw),
            other => Err(Error::InvalidInput(format!("unknown solver '{other}'"))),
        }
    }
}

/// Legendre function behind the Bregman divergence of BAPG.
///
/// `Entropy` uses `h(x) = sum x log x` (KL divergence), `Quadratic` uses
/// `h(x) = ||x||^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Entropy,
    Quadratic,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Entropy => "entropy",
            Geometry::Quadratic => "quadratic",
        }
    }
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "entropy" | "kl" => Ok(Geometry::Entropy),
            "quadratic" | "euclidean" => Ok(Geometry::Quadratic),
            other => Err(Error::InvalidInput(format!("unknown geometry '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Bregman geometry, BAPG only.
    pub geometry: Geometry,
    /// BAPG step size (penalty weight).
    pub rho: f64,
    /// BPG step size `t`.
    pub step: f64,
    /// eBPG entropic regularization.
    pub epsilon_reg: f64,
    /// Inner Sinkhorn sweep cap; 1 gives BPG-S.
    pub inner_iters: usize,
    pub inner_tol: f64,
    /// Outer stopping tolerance on the relative Frobenius change.
    pub rel_tol: f64,
    pub max_iters: usize,
    /// Mixing weight toward the uniform coupling after each BPG step.
    pub perturbation: f64,
    /// hBPG warm-start (eBPG) budget.
    pub switch_iters: usize,
    pub seed: u64,
    /// Run eBPG's inner Sinkhorn in the log domain.
    pub log_domain: bool,
    /// Evaluate the Luo-Tseng residual at every recorded iterate.
    pub track_residual: bool,
    /// Amplitude of the seeded multiplicative jitter applied to the product
    /// initialization (0 keeps the plain product coupling).
    pub init_jitter: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Bapg,
            geometry: Geometry::Entropy,
            rho: 0.1,
            step: 5.0,
            epsilon_reg: EPSILON_REG_GRID[0],
            inner_iters: 1000,
            inner_tol: 1e-9,
            rel_tol: 1e-6,
            max_iters: 2000,
            perturbation: 0.0,
            switch_iters: 200,
            seed: 0,
            log_domain: false,
            track_residual: false,
            init_jitter: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rho", self.rho),
            ("step", self.step),
            ("epsilon_reg", self.epsilon_reg),
            ("inner_tol", self.inner_tol),
            ("rel_tol", self.rel_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.inner_iters == 0 {
            return Err(Error::InvalidInput("inner_iters must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.perturbation) {
            return Err(Error::InvalidInput(format!(
                "perturbation must lie in [0, 1), got {}",
                self.perturbation
            )));
        }
        if !(self.init_jitter.is_finite() && self.init_jitter >= 0.0) {
            return Err(Error::InvalidInput("init_jitter must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// GW objective of the reported iterate (the averaged iterate for BAPG).
    pub objective: f64,
    pub marginal_infeasibility: f64,
    /// `||pi - w||_F` for BAPG, 0 otherwise.
    pub split_gap: f64,
    /// Sum of the infinity-norm violations of the constraints each iterate is
    /// supposed to satisfy exactly (rows of `pi` and columns of `w` for BAPG,
    /// both marginals otherwise).
    pub constraint_violation: f64,
    /// BAPG potential `f(pi, w) + rho D_h(pi, w)`.
    pub potential: Option<f64>,
    pub residual: Option<f64>,
    pub rel_change: f64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub final_coupling: Coupling,
    /// Both BAPG halves; `final_coupling` is their average.
    pub split: Option<SplitIterate>,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub iterations_used: usize,
    /// For hBPG, the trace index where the BPG phase begins.
    pub phase_switch: Option<usize>,
}

impl SolveReport {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.trace.last()
    }

    pub fn final_split_gap(&self) -> f64 {
        self.last().map_or(0.0, |r| r.split_gap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_experimental_protocol() {
        let c = SolverConfig::default();
        assert_eq!(c.rel_tol, 1e-6);
        assert_eq!(c.max_iters, 2000);
        assert_eq!(c.rho, 0.1);
        assert_eq!(c.step, 5.0);
        assert!(EPSILON_REG_GRID.contains(&c.epsilon_reg));
        assert_eq!(c.perturbation, 0.0);
        assert_eq!(c.switch_iters, 200);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = SolverConfig::default();
        c.rho = 0.0;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.inner_iters = 0;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.perturbation = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn parses_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sgd".parse::<Algorithm>().is_err());
        assert_eq!("KL".parse::<Geometry>().unwrap(), Geometry::Entropy);
    }
}
