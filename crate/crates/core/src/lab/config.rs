//! Run configuration: a plain sectioned `key = value` file.
//!
//! ```text
//! # ellipse with axis ratio 1.2
//! [curve]
//! shape = ellipse
//! a = 1.2
//! b = 1.0
//! n_samples = 512
//!
//! [run]
//! task = theorem31_chain
//! angular_order = 30
//!
//! [output]
//! dir = out/ellipse
//! format = json
//! ```
//!
//! `shape = fourier` takes repeated `coef = k re [im]` lines for
//! `z(t) = Σ c_k e^{ikt}`. Optional `rotate` (radians) and `scale` apply to
//! any shape.

use crate::curve::{CurveSpec, DEFAULT_SAMPLES};
use crate::eigen::SolverConfig;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    DiskReference,
    Theorem31Chain,
    Theorem34Chain,
    OverdeterminedScan,
    TraceValidation,
    NodalSuite,
}

impl Task {
    pub const ALL: [Task; 6] = [
        Task::DiskReference,
        Task::Theorem31Chain,
        Task::Theorem34Chain,
        Task::OverdeterminedScan,
        Task::TraceValidation,
        Task::NodalSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::DiskReference => "disk_reference",
            Task::Theorem31Chain => "theorem31_chain",
            Task::Theorem34Chain => "theorem34_chain",
            Task::OverdeterminedScan => "overdetermined_scan",
            Task::TraceValidation => "trace_validation",
            Task::NodalSuite => "nodal_suite",
        }
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown task '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!(
                "unknown format '{s}' (expected json or csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub curve: CurveSpec,
    pub n_samples: usize,
    pub angular_order: usize,
    pub eigen_count: usize,
    /// Nodal sampling grid spacing, relative to the effective radius.
    pub h: f64,
    /// Comparison tolerance for traces, tables and identities.
    pub tol: f64,
    /// Relative tolerance of Gram verdicts.
    pub gram_tol: f64,
    /// Eigenpair certification threshold.
    pub residual_tol: f64,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Defaults for `task` on `curve`.
    pub fn new(task: Task, curve: CurveSpec) -> Self {
        Self {
            task,
            curve,
            n_samples: DEFAULT_SAMPLES,
            angular_order: 30,
            eigen_count: 13,
            h: 0.01,
            tol: 1e-8,
            gram_tol: 1e-8,
            residual_tol: 1e-6,
            seed: 20_240_601,
            out_dir: None,
            format: Format::Json,
        }
    }

    pub fn load(path: &Path, requested: Option<Task>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_for(&text, requested)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_for(text, None)
    }

    /// Parses with the task supplied by the caller; a `[run] task` entry,
    /// if present, must agree with it.
    pub fn parse_for(text: &str, requested: Option<Task>) -> Result<Self> {
        let mut section = String::new();
        let mut shape: Option<String> = None;
        let mut coefs: Vec<(i32, Complex64)> = Vec::new();
        let mut nums: Vec<(String, String, usize)> = Vec::new();
        let mut task = None;
        let mut out_dir = None;
        let mut format = Format::Json;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = lineno + 1;
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                if !matches!(section.as_str(), "curve" | "run" | "output") {
                    return Err(Error::Config(format!(
                        "line {at}: unknown section [{section}]"
                    )));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Config(format!("line {at}: expected 'key = value'")))?;
            match (section.as_str(), key) {
                ("", _) => {
                    return Err(Error::Config(format!(
                        "line {at}: '{key}' outside a section"
                    )))
                }
                ("curve", "shape") => shape = Some(value.to_string()),
                ("curve", "coef") => coefs.push(parse_coef(value, at)?),
                ("curve", "radius" | "a" | "b" | "rotate" | "scale" | "n_samples") => {
                    nums.push((key.to_string(), value.to_string(), at))
                }
                ("run", "task") => task = Some(value.parse::<Task>()?),
                (
                    "run",
                    "angular_order" | "eigen_count" | "h" | "tol" | "gram_tol" | "residual_tol"
                    | "seed",
                ) => nums.push((key.to_string(), value.to_string(), at)),
                ("output", "dir") => out_dir = Some(PathBuf::from(value)),
                ("output", "format") => format = value.parse()?,
                (s, k) => {
                    return Err(Error::Config(format!(
                        "line {at}: unknown key '{k}' in [{s}]"
                    )))
                }
            }
        }
        let get = |name: &str| -> Result<Option<f64>> {
            match nums.iter().rev().find(|(k, _, _)| k == name) {
                None => Ok(None),
                Some((_, v, at)) => v.parse::<f64>().map(Some).map_err(|_| {
                    Error::Config(format!("line {at}: '{name}' is not a number: '{v}'"))
                }),
            }
        };
        let get_usize = |name: &str| -> Result<Option<usize>> {
            match get(name)? {
                None => Ok(None),
                Some(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e9 => Ok(Some(v as usize)),
                Some(v) => Err(Error::Config(format!(
                    "'{name}' must be a nonnegative integer, got {v}"
                ))),
            }
        };
        let task = match (task, requested) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!(
                    "config declares task {} but {} was requested",
                    a.name(),
                    b.name()
                )))
            }
            (Some(t), _) | (None, Some(t)) => t,
            (None, None) => return Err(Error::Config("missing [run] task".into())),
        };
        let need = |name: &str| -> Result<f64> {
            get(name)?.ok_or_else(|| Error::Config(format!("[curve] shape requires '{name}'")))
        };
        let spec = match shape.as_deref() {
            None => return Err(Error::Config("missing [curve] shape".into())),
            Some("circle") => CurveSpec::circle(need("radius")?),
            Some("ellipse") => CurveSpec::ellipse(need("a")?, need("b")?),
            Some("fourier") => {
                if coefs.is_empty() {
                    return Err(Error::Config(
                        "shape = fourier needs at least one 'coef' line".into(),
                    ));
                }
                CurveSpec::new(coefs)
            }
            Some(other) => return Err(Error::Config(format!("unknown shape '{other}'"))),
        }
        .map_err(|e| Error::Config(format!("curve: {e}")))?;
        let mut spec = spec;
        if let Some(s) = get("scale")? {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("scale must be positive, got {s}")));
            }
            spec = spec.scaled(s);
        }
        if let Some(a) = get("rotate")? {
            spec = spec.rotated(a);
        }
        let mut cfg = RunConfig::new(task, spec);
        if let Some(n) = get_usize("n_samples")? {
            cfg.n_samples = n;
        }
        if let Some(v) = get_usize("angular_order")? {
            cfg.angular_order = v;
        }
        if let Some(v) = get_usize("eigen_count")? {
            cfg.eigen_count = v;
        }
        if let Some(v) = get_usize("seed")? {
            cfg.seed = v as u64;
        }
        for (name, slot) in [
            ("h", &mut cfg.h),
            ("tol", &mut cfg.tol),
            ("gram_tol", &mut cfg.gram_tol),
            ("residual_tol", &mut cfg.residual_tol),
        ] {
            if let Some(v) = get(name)? {
                *slot = v;
            }
        }
        cfg.out_dir = out_dir;
        cfg.format = format;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("h", self.h),
            ("tol", self.tol),
            ("gram_tol", self.gram_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("'{name}' must be positive, got {v}")));
            }
        }
        if self.n_samples < 64 || !self.n_samples.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n_samples must be even and at least 64, got {}",
                self.n_samples
            )));
        }
        if !(4..=45).contains(&self.angular_order) {
            return Err(Error::Config(format!(
                "angular_order must lie in 4..=45, got {}",
                self.angular_order
            )));
        }
        if self.eigen_count == 0 || self.eigen_count > crate::eigen::MAX_COUNT {
            return Err(Error::Config(format!(
                "eigen_count must lie in 1..={}",
                crate::eigen::MAX_COUNT
            )));
        }
        if self.task == Task::OverdeterminedScan && self.eigen_count < 13 {
            return Err(Error::Config(format!(
                "overdetermined_scan needs eigen_count ≥ 13 to cover the spectrum up to μ₁₃, got {}",
                self.eigen_count
            )));
        }
        if self.h >= 0.1 {
            return Err(Error::Config(format!(
                "h = {} is too coarse for nodal sampling",
                self.h
            )));
        }
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            angular_order: self.angular_order,
            residual_tol: self.residual_tol,
            ..SolverConfig::default()
        }
    }

    /// Same run on a transformed curve.
    pub fn with_curve(&self, curve: CurveSpec) -> Self {
        Self {
            curve,
            ..self.clone()
        }
    }
}

fn parse_coef(value: &str, at: usize) -> Result<(i32, Complex64)> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    let bad = || {
        Error::Config(format!(
            "line {at}: expected 'coef = k re [im]', got '{value}'"
        ))
    };
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let k: i32 = parts[0].parse().map_err(|_| bad())?;
    let re: f64 = parts[1].parse().map_err(|_| bad())?;
    let im: f64 = parts
        .get(2)
        .map_or(Ok(0.0), |p| p.parse())
        .map_err(|_| bad())?;
    Ok((k, Complex64::new(re, im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fourier_curve() {
        let cfg = RunConfig::parse(
            "[curve]\nshape = fourier\ncoef = 1 1.0\ncoef = -3 0.05 0.0 # small\n\n[run]\ntask = theorem34_chain\ntol = 1e-9\n",
        )
        .unwrap();
        assert_eq!(cfg.task, Task::Theorem34Chain);
        assert_eq!(cfg.curve.coefficients().len(), 2);
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.n_samples, DEFAULT_SAMPLES);
    }

    #[test]
    fn rejects_bad_input() {
        let base = "[curve]\nshape = circle\nradius = 1\n[run]\n";
        assert!(RunConfig::parse(&format!("{base}task = disk_reference\n")).is_ok());
        assert!(RunConfig::parse(&format!("{base}task = nope\n")).is_err());
        assert!(RunConfig::parse(&format!("{base}task = disk_reference\ntol = -1\n")).is_err());
        assert!(RunConfig::parse(&format!("{base}task = disk_reference\nbogus = 1\n")).is_err());
        assert!(RunConfig::parse(&format!(
            "{base}task = overdetermined_scan\neigen_count = 8\n"
        ))
        .is_err());
        assert!(
            RunConfig::parse("[curve]\nshape = ellipse\na = 1\n[run]\ntask = nodal_suite\n")
                .is_err()
        );
        assert!(RunConfig::parse("[run]\ntask = nodal_suite\n").is_err());
        let no_task = "[curve]\nshape = circle\nradius = 2\n";
        assert!(RunConfig::parse(no_task).is_err());
        assert_eq!(
            RunConfig::parse_for(no_task, Some(Task::NodalSuite))
                .unwrap()
                .task,
            Task::NodalSuite
        );
        let with = format!("{base}task = disk_reference\n");
        assert!(RunConfig::parse_for(&with, Some(Task::NodalSuite)).is_err());
    }
}
