use clap::{Parser, ValueEnum};
use schiffer_core::lab::{emit_report, run, Format, RunConfig, Task};
use schiffer_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VERDICT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_OUTPUT: u8 = 4;

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum TaskArg {
    DiskReference,
    Theorem31Chain,
    Theorem34Chain,
    OverdeterminedScan,
    TraceValidation,
    NodalSuite,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::DiskReference => Task::DiskReference,
            TaskArg::Theorem31Chain => Task::Theorem31Chain,
            TaskArg::Theorem34Chain => Task::Theorem34Chain,
            TaskArg::OverdeterminedScan => Task::OverdeterminedScan,
            TaskArg::TraceValidation => Task::TraceValidation,
            TaskArg::NodalSuite => Task::NodalSuite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Numerical checks for the overdetermined Neumann problem on planar domains.
///
/// Exit status: 0 all steps passed, 1 some step failed, 2 configuration
/// error, 3 solver or numerical failure, 4 output could not be written.
/// Log verbosity is read from SCHIFFER_LOG (e.g. SCHIFFER_LOG=info).
#[derive(Parser)]
#[command(name = "schiffer-lab", version)]
struct Cli {
    task: TaskArg,
    /// Sectioned key = value run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides [output] dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Boundary samples (overrides [curve] n_samples).
    #[arg(long)]
    n_samples: Option<usize>,
    /// Comparison tolerance (overrides [run] tol).
    #[arg(long)]
    tol: Option<f64>,
    /// Report format (overrides [output] format).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::InvalidCurve(_)
        | Error::SelfIntersection { .. }
        | Error::VanishingSpeed { .. }
        | Error::NotConvex { .. }
        | Error::NotCentrallySymmetric { .. } => EXIT_CONFIG,
        Error::Io { .. } | Error::Json(_) => EXIT_OUTPUT,
        _ => EXIT_SOLVER,
    }
}

fn configure(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::load(&cli.config, Some(cli.task.into())).map_err(|e| match e {
        Error::Io { path, source } => Error::Config(format!("cannot read {path}: {source}")),
        other => other,
    })?;
    if let Some(n) = cli.n_samples {
        cfg.n_samples = n;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }
    if let Some(dir) = &cli.out {
        cfg.out_dir = Some(dir.clone());
    }
    if cfg.out_dir.is_none() {
        return Err(Error::Config(
            "no output directory: pass --out or set [output] dir".into(),
        ));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SCHIFFER_LOG", "warn")).init();

    let cfg = match configure(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    log::info!(
        "running {} on {} boundary samples",
        cfg.task.name(),
        cfg.n_samples
    );
    let (report, timings) = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let dir = cfg.out_dir.as_deref().expect("checked in configure");
    if let Err(e) = emit_report(&report, &timings, dir, cfg.format) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_OUTPUT);
    }
    let passed = report.steps.iter().filter(|s| s.pass).count();
    println!(
        "{}: {:?} ({}/{} steps passed, {:.1} s) -> {}",
        cfg.task.name(),
        report.status,
        passed,
        report.steps.len(),
        timings.total_seconds,
        dir.display()
    );
    for s in report.steps.iter().filter(|s| !s.pass) {
        println!("  failed: {} = {}", s.name, s.computed);
    }
    if report.overall_verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERDICT)
    }
}
