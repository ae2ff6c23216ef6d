use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schiffer-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const ELLIPSE: &str = "[curve]\nshape = ellipse\na = 1.5\nb = 1.0\n";

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn trace_validation_passes_and_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.conf", ELLIPSE);
    let out = tmp.path().join("out");
    let o = lab(&[
        "trace_validation",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = report(&out);
    assert_eq!(r["overall_verdict"], true);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["task"], "trace_validation");
    assert!(out.join("timings.json").exists());
    let wxx = fs::read_to_string(out.join("trace_wxx.csv")).unwrap();
    assert!(wxx.starts_with("s,theta,dirichlet_re"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "t.conf",
        "[curve]\nshape = ellipse\na = 1.2\nb = 1.0\n",
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let o = lab(&[
            "theorem31_chain",
            "--config",
            &cfg,
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
    assert_eq!(
        fs::read(a.join("report.json")).unwrap(),
        fs::read(b.join("report.json")).unwrap()
    );
}

#[test]
fn csv_format_and_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "t.conf",
        &format!("{ELLIPSE}[output]\ndir = unused\n"),
    );
    let out = tmp.path().join("csv");
    let o = lab(&[
        "trace_validation",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
        "--n-samples",
        "256",
        "--tol",
        "1e-7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let steps = fs::read_to_string(out.join("steps.csv")).unwrap();
    assert!(steps.starts_with("name,pass,tolerance,computed,expected,reference\n"));
    assert!(!out.join("report.json").exists());
}

#[test]
fn configuration_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();
    let missing = tmp.path().join("missing.conf");
    assert_eq!(
        lab(&[
            "trace_validation",
            "--config",
            missing.to_str().unwrap(),
            "--out",
            out
        ])
        .status
        .code(),
        Some(2)
    );
    let bad = write_config(
        tmp.path(),
        "bad.conf",
        "[curve]\nshape = ellipse\na = 1.5\n",
    );
    assert_eq!(
        lab(&["trace_validation", "--config", &bad, "--out", out])
            .status
            .code(),
        Some(2)
    );
    let mismatch = write_config(
        tmp.path(),
        "m.conf",
        &format!("{ELLIPSE}[run]\ntask = nodal_suite\n"),
    );
    assert_eq!(
        lab(&["trace_validation", "--config", &mismatch, "--out", out])
            .status
            .code(),
        Some(2)
    );
    let cfg = write_config(tmp.path(), "t.conf", ELLIPSE);
    assert_eq!(
        lab(&["trace_validation", "--config", &cfg]).status.code(),
        Some(2)
    );
    assert_eq!(
        lab(&[
            "trace_validation",
            "--config",
            &cfg,
            "--out",
            out,
            "--tol",
            "-1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["no_such_task", "--config", &cfg, "--out", out])
            .status
            .code(),
        Some(2)
    );
    // disk_reference needs a centered circle
    assert_eq!(
        lab(&["disk_reference", "--config", &cfg, "--out", out])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failed_precondition_is_a_verdict_failure() {
    let tmp = tempfile::tempdir().unwrap();
    // even mode: not centrally symmetric
    let cfg = write_config(
        tmp.path(),
        "t.conf",
        "[curve]\nshape = fourier\ncoef = 1 1.0\ncoef = -2 0.1\n",
    );
    let out = tmp.path().join("o");
    let o = lab(&[
        "theorem34_chain",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["overall_verdict"], false);
    assert_eq!(r["status"], "failed");
    assert!(String::from_utf8_lossy(&o.stdout).contains("failed: preconditions"));
}

#[test]
fn disk_chain_reports_expected_degeneracy() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "t.conf",
        "[curve]\nshape = circle\nradius = 2.0\n",
    );
    let out = tmp.path().join("o");
    let o = lab(&[
        "theorem31_chain",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&out)["status"], "expected_degeneracy");
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        schiffer_core::lab::RunConfig::parse(&text)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 6);
}
