//! Merges the INI config file with command-line flags and expands the
//! solver grid.
//!
//! Config grammar: `key = value` lines, optionally grouped in sections.
//! Keys outside any section and in `[solver]` apply to every task; keys in
//! `[align]`, `[partition]` or `[match2d]` apply to that task only and win
//! over the shared ones. Command-line flags win over the file. Keys use
//! underscores or dashes interchangeably; values may be comma-separated
//! lists where the flag accepts a grid.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gw_core::{Algorithm, Geometry, SolverConfig};
use ini::Ini;

use crate::args::SolverArgs;
use crate::error::{CliError, CliResult};

pub const SOLVER_KEYS: &[&str] = &[
    "solver",
    "geometry",
    "rho",
    "step",
    "eps",
    "inner_iters",
    "inner_tol",
    "rel_tol",
    "max_iters",
    "switch_iters",
    "perturbation",
    "init_jitter",
    "log_domain",
    "track_residual",
    "trace",
    "seed",
    "jobs",
    "out",
];

pub const ALIGN_KEYS: &[&str] = &["source", "target", "ground_truth", "nodes", "attach", "noise"];
pub const PARTITION_KEYS: &[&str] = &["source", "labels", "nodes", "clusters", "p_in", "p_out", "target_weights"];
pub const MATCH2D_KEYS: &[&str] = &["shape", "source_points", "target_points", "angle"];

fn task_keys(task: &str) -> &'static [&'static str] {
    match task {
        "align" => ALIGN_KEYS,
        "partition" => PARTITION_KEYS,
        "match2d" => MATCH2D_KEYS,
        _ => &[],
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// `flags` are the task-specific command-line values; the shared solver
    /// flags come from `solver`.
    pub fn load(task: &str, solver: &SolverArgs, flags: Vec<(&str, Option<String>)>) -> CliResult<Self> {
        let mut settings = Settings::default();
        if let Some(path) = &solver.config {
            settings.merge_ini(path, task)?;
        }
        let shared = [
            ("solver", &solver.solver),
            ("geometry", &solver.geometry),
            ("rho", &solver.rho),
            ("step", &solver.step),
            ("eps", &solver.eps),
            ("inner_iters", &solver.inner_iters),
            ("inner_tol", &solver.inner_tol),
            ("rel_tol", &solver.rel_tol),
            ("max_iters", &solver.max_iters),
            ("switch_iters", &solver.switch_iters),
            ("perturbation", &solver.perturbation),
            ("init_jitter", &solver.init_jitter),
            ("log_domain", &solver.log_domain),
            ("track_residual", &solver.track_residual),
            ("trace", &solver.trace),
            ("seed", &solver.seed),
            ("jobs", &solver.jobs),
        ];
        for (key, value) in shared {
            if let Some(v) = value {
                settings.values.insert(key.to_string(), v.clone());
            }
        }
        if let Some(out) = &solver.out {
            settings.values.insert("out".into(), out.display().to_string());
        }
        for (key, value) in flags {
            if let Some(v) = value {
                settings.values.insert(key.to_string(), v);
            }
        }
        Ok(settings)
    }

    fn merge_ini(&mut self, path: &Path, task: &str) -> CliResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let ini = Ini::load_from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut shared = BTreeMap::new();
        let mut specific = BTreeMap::new();
        for (section, props) in ini.iter() {
            let section = section.map(|s| s.trim().to_ascii_lowercase());
            let (allowed, target) = match section.as_deref() {
                None | Some("solver") => (vec![SOLVER_KEYS], Some(&mut shared)),
                Some(name @ ("align" | "partition" | "match2d")) => {
                    let into = if name == task { Some(&mut specific) } else { None };
                    (vec![SOLVER_KEYS, task_keys(name)], into)
                }
                Some(other) => {
                    return Err(CliError::Config(format!(
                        "{}: unknown section [{other}]",
                        path.display()
                    )))
                }
            };
            let mut target = target;
            for (key, value) in props.iter() {
                let key = normalize(key);
                if !allowed.iter().any(|set| set.contains(&key.as_str())) {
                    return Err(CliError::Config(format!(
                        "{}: unknown key '{key}' in section [{}]",
                        path.display(),
                        section.as_deref().unwrap_or("")
                    )));
                }
                if let Some(t) = target.as_deref_mut() {
                    t.insert(key, value.trim().to_string());
                }
            }
        }
        self.values.extend(shared);
        self.values.extend(specific);
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn list<T>(&self, key: &str, default: &str) -> CliResult<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let text = self.raw(key).unwrap_or(default);
        let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.is_empty() {
            return Err(CliError::Config(format!("'{key}' has no values")));
        }
        items
            .into_iter()
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| CliError::Config(format!("invalid value '{s}' for '{key}': {e}")))
            })
            .collect()
    }

    pub fn one<T>(&self, key: &str, default: &str) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        let mut values = self.list::<T>(key, default)?;
        if values.len() != 1 {
            return Err(CliError::Config(format!("'{key}' takes a single value")));
        }
        Ok(values.remove(0))
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }
}

fn finite_positive(key: &str, values: &[f64]) -> CliResult<()> {
    match values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(CliError::Config(format!("'{key}' must be positive and finite, got {v}"))),
        None => Ok(()),
    }
}

/// Expands the grid. Axes that an algorithm ignores collapse to their first
/// value so no duplicate runs are produced.
pub fn solver_grid(s: &Settings) -> CliResult<Vec<SolverConfig>> {
    let defaults = SolverConfig::default();
    let algorithms: Vec<Algorithm> = s.list("solver", "bapg")?;
    let geometries: Vec<Geometry> = s.list("geometry", "entropy")?;
    let rhos: Vec<f64> = s.list("rho", &defaults.rho.to_string())?;
    let steps: Vec<f64> = s.list("step", &defaults.step.to_string())?;
    let epss: Vec<f64> = s.list("eps", &defaults.epsilon_reg.to_string())?;
    let inner: Vec<usize> = s.list("inner_iters", &defaults.inner_iters.to_string())?;
    finite_positive("rho", &rhos)?;
    finite_positive("step", &steps)?;
    finite_positive("eps", &epss)?;
    let base = SolverConfig {
        inner_tol: s.one("inner_tol", &defaults.inner_tol.to_string())?,
        rel_tol: s.one("rel_tol", &defaults.rel_tol.to_string())?,
        max_iters: s.one("max_iters", &defaults.max_iters.to_string())?,
        switch_iters: s.one("switch_iters", &defaults.switch_iters.to_string())?,
        perturbation: s.one("perturbation", &defaults.perturbation.to_string())?,
        init_jitter: s.one("init_jitter", &defaults.init_jitter.to_string())?,
        log_domain: s.one("log_domain", "false")?,
        track_residual: s.one("track_residual", "false")?,
        ..defaults
    };
    let first = |v: &[f64]| vec![v[0]];
    let mut grid = Vec::new();
    for &algorithm in &algorithms {
        let uses = |a: &[Algorithm]| a.contains(&algorithm);
        let g_axis = if uses(&[Algorithm::Bapg]) { geometries.clone() } else { vec![geometries[0]] };
        let r_axis = if uses(&[Algorithm::Bapg]) { rhos.clone() } else { first(&rhos) };
        let t_axis = if uses(&[Algorithm::Bpg, Algorithm::Hbpg]) { steps.clone() } else { first(&steps) };
        let e_axis = if uses(&[Algorithm::Ebpg, Algorithm::Hbpg]) { epss.clone() } else { first(&epss) };
        let i_axis = if uses(&[Algorithm::Bpg, Algorithm::Ebpg, Algorithm::Hbpg]) {
            inner.clone()
        } else {
            vec![inner[0]]
        };
        for &geometry in &g_axis {
            for &rho in &r_axis {
                for &step in &t_axis {
                    for &epsilon_reg in &e_axis {
                        for &inner_iters in &i_axis {
                            let cfg = SolverConfig {
                                algorithm,
                                geometry,
                                rho,
                                step,
                                epsilon_reg,
                                inner_iters,
                                ..base.clone()
                            };
                            cfg.validate()?;
                            grid.push(cfg);
                        }
                    }
                }
            }
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn with_flags(pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.values.insert(k.to_string(), v.to_string());
        }
        s
    }

    #[test]
    fn defaults_give_one_bapg_run() {
        let grid = solver_grid(&Settings::default()).unwrap();
        assert_eq!(grid, vec![SolverConfig::default()]);
    }

    #[test]
    fn irrelevant_axes_collapse() {
        let s = with_flags(&[("solver", "bapg,bpg,fw"), ("rho", "0.1,0.2"), ("step", "1,2,3")]);
        let grid = solver_grid(&s).unwrap();
        let count = |a| grid.iter().filter(|c| c.algorithm == a).count();
        assert_eq!(count(Algorithm::Bapg), 2);
        assert_eq!(count(Algorithm::Bpg), 3);
        assert_eq!(count(Algorithm::Fw), 1);
    }

    #[test]
    fn bad_values_are_config_errors() {
        assert!(solver_grid(&with_flags(&[("rho", "abc")])).is_err());
        assert!(solver_grid(&with_flags(&[("rho", "-1")])).is_err());
        assert!(solver_grid(&with_flags(&[("max_iters", "10,20")])).is_err());
        assert!(solver_grid(&with_flags(&[("solver", "sgd")])).is_err());
    }

    #[test]
    fn ini_sections_and_flag_precedence() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "rho = 0.4\n[solver]\nmax-iters = 50\n[align]\nnodes = 12\nrho = 0.8\n[partition]\nclusters = 4").unwrap();
        let args = SolverArgs {
            config: Some(f.path().to_path_buf()),
            max_iters: Some("70".into()),
            ..SolverArgs::default()
        };
        let s = Settings::load("align", &args, vec![]).unwrap();
        assert_eq!(s.raw("rho"), Some("0.8"));
        assert_eq!(s.raw("nodes"), Some("12"));
        assert_eq!(s.raw("max_iters"), Some("70"));
        assert_eq!(s.raw("clusters"), None);
    }

    #[test]
    fn ini_unknown_key_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "[solver]\nrhoo = 0.4").unwrap();
        let args = SolverArgs {
            config: Some(f.path().to_path_buf()),
            ..SolverArgs::default()
        };
        assert!(matches!(Settings::load("align", &args, vec![]), Err(CliError::Config(_))));
    }
}
