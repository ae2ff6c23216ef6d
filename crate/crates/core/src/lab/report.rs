use super::config::{Format, Task};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    /// Every step passed, and a degeneracy that only the disk exhibits was
    /// observed where it was expected.
    ExpectedDegeneracy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub computed: Value,
    pub expected: Option<Value>,
    /// Where the expected value comes from.
    pub reference: Option<String>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.columns)
                .map(|(v, c)| {
                    if c == "index" {
                        format!("{}", *v as i64)
                    } else {
                        format!("{v:.12e}")
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub task: Task,
    /// `(k, re, im)` Fourier coefficients of the input curve.
    pub curve: Vec<[f64; 3]>,
    pub n_samples: usize,
    pub status: Status,
    pub overall_verdict: bool,
    pub steps: Vec<Step>,
    /// Scale- and rotation-free quantities, keyed by name.
    pub invariants: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub series: Vec<Series>,
}

impl VerificationReport {
    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn steps_csv(&self) -> String {
        let mut out = String::from("name,pass,tolerance,computed,expected,reference\n");
        for s in &self.steps {
            let q = |v: &str| format!("\"{}\"", v.replace('"', "\"\""));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.name,
                s.pass,
                s.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
                q(&s.computed.to_string()),
                q(&s.expected
                    .as_ref()
                    .map(|e| e.to_string())
                    .unwrap_or_default()),
                q(s.reference.as_deref().unwrap_or("")),
            );
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub steps: Vec<(String, f64)>,
}

/// Accumulates steps, invariants and per-step wall time.
pub(crate) struct Recorder {
    task: Task,
    curve: Vec<[f64; 3]>,
    n_samples: usize,
    steps: Vec<Step>,
    invariants: BTreeMap<String, f64>,
    notes: Vec<String>,
    series: Vec<Series>,
    degenerate: bool,
    started: Instant,
    lap: Instant,
    timings: Vec<(String, f64)>,
}

impl Recorder {
    pub fn new(task: Task, curve: &CurveSpec, n_samples: usize) -> Self {
        let now = Instant::now();
        Self {
            task,
            curve: curve
                .coefficients()
                .iter()
                .map(|&(k, c)| [k as f64, c.re, c.im])
                .collect(),
            n_samples,
            steps: Vec::new(),
            invariants: BTreeMap::new(),
            notes: Vec::new(),
            series: Vec::new(),
            degenerate: false,
            started: now,
            lap: now,
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, step: Step) {
        self.timings
            .push((step.name.clone(), self.lap.elapsed().as_secs_f64()));
        self.lap = Instant::now();
        self.steps.push(step);
    }

    /// `computed ≤ tolerance`.
    pub fn bound(&mut self, name: &str, computed: f64, tolerance: f64, reference: &str) {
        self.push(Step {
            name: name.into(),
            computed: finite(computed),
            expected: Some(Value::String(format!("<= {tolerance:e}"))),
            reference: Some(reference.into()),
            tolerance: Some(tolerance),
            pass: computed <= tolerance,
            note: None,
        });
    }

    /// `|computed − expected| ≤ tolerance`.
    pub fn close(
        &mut self,
        name: &str,
        computed: f64,
        expected: f64,
        tolerance: f64,
        reference: &str,
    ) {
        self.push(Step {
            name: name.into(),
            computed: finite(computed),
            expected: Some(finite(expected)),
            reference: Some(reference.into()),
            tolerance: Some(tolerance),
            pass: (computed - expected).abs() <= tolerance,
            note: None,
        });
    }

    pub fn check(&mut self, name: &str, computed: Value, pass: bool, note: Option<String>) {
        self.push(Step {
            name: name.into(),
            computed,
            expected: None,
            reference: None,
            tolerance: None,
            pass,
            note,
        });
    }

    pub fn invariant(&mut self, name: impl Into<String>, value: f64) {
        self.invariants.insert(name.into(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn series(&mut self, s: Series) {
        self.series.push(s);
    }

    pub fn expected_degeneracy(&mut self) {
        self.degenerate = true;
    }

    pub fn finish(self) -> (VerificationReport, Timings) {
        let overall_verdict = self.steps.iter().all(|s| s.pass);
        let status = match (overall_verdict, self.degenerate) {
            (false, _) => Status::Failed,
            (true, true) => Status::ExpectedDegeneracy,
            (true, false) => Status::Passed,
        };
        let timings = Timings {
            total_seconds: self.started.elapsed().as_secs_f64(),
            steps: self.timings,
        };
        let report = VerificationReport {
            schema_version: SCHEMA_VERSION,
            task: self.task,
            curve: self.curve,
            n_samples: self.n_samples,
            status,
            overall_verdict,
            steps: self.steps,
            invariants: self.invariants,
            notes: self.notes,
            series: self.series,
        };
        (report, timings)
    }
}

/// JSON number, or a string for non-finite values (JSON has no NaN).
pub(crate) fn finite(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(format!("{v}")), Value::Number)
}

pub(crate) fn finite_vec(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| finite(x)).collect())
}

/// Writes the report into `dir` and returns the written paths.
///
/// `json` writes `report.json`; `csv` writes `steps.csv`. Both write every
/// series as `<name>.csv` and the wall-clock timings as `timings.json`, which
/// is kept out of the report so that repeated runs are byte-identical.
pub fn emit_report(
    report: &VerificationReport,
    timings: &Timings,
    dir: &Path,
    format: Format,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    let mut write = |name: &str, body: String| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        written.push(path);
        Ok(())
    };
    match format {
        Format::Json => write("report.json", report.to_json()?)?,
        Format::Csv => write("steps.csv", report.steps_csv())?,
    }
    for s in &report.series {
        write(&format!("{}.csv", s.name), s.to_csv())?;
    }
    write(
        "timings.json",
        serde_json::to_string_pretty(timings)? + "\n",
    )?;
    Ok(written)
}
