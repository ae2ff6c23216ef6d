//! Verification runs over configured domains, with machine-readable reports.

pub mod config;
pub mod report;
pub mod tasks;

pub use config::{Format, RunConfig, Task};
pub use report::{emit_report, Series, Status, Step, Timings, VerificationReport, SCHEMA_VERSION};
pub use tasks::{
    run, run_disk_reference, run_nodal_suite, run_overdetermined_scan, run_theorem_chain,
    run_trace_validation,
};
