//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schiffer_core::bessel::disk_spectrum;
use schiffer_core::bilinear::{boundary_b, gram_on_subspace, w2_theta_gram, SubspaceBasis};
use schiffer_core::eigen::{solve_spectrum, BoundaryCondition, SolverConfig};
use schiffer_core::fields::{trace_of_field, HelmholtzField, PlaneWaves};
use schiffer_core::lab::{run, RunConfig, Task, VerificationReport};
use schiffer_core::quadrature::star_integral;
use schiffer_core::{build_curve, CurveSpec};
use std::time::Instant;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fourier(terms: &[(i32, f64, f64)]) -> CurveSpec {
    CurveSpec::new(terms.iter().map(|&(k, re, im)| (k, Complex64::new(re, im)))).unwrap()
}

fn oval() -> CurveSpec {
    fourier(&[(1, 1.0, 0.0), (-3, 0.06, 0.0), (3, 0.02, 0.01)])
}

fn run_task(task: Task, curve: CurveSpec, n_samples: usize) -> Result<VerificationReport, String> {
    let mut cfg = RunConfig::new(task, curve);
    cfg.n_samples = n_samples;
    run(&cfg).map(|(r, _)| r).map_err(|e| e.to_string())
}

fn steps_pass(r: &VerificationReport, names: &[&str]) -> Result<bool, String> {
    names.iter().try_fold(true, |ok, n| {
        r.step(n)
            .map(|s| ok && s.pass)
            .ok_or_else(|| format!("{:?} report has no step {n}", r.task))
    })
}

fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn disk_spectra() -> Outcome {
    let start = Instant::now();
    let curve = build_curve(&CurveSpec::circle(1.0).unwrap(), 512).map_err(|e| e.to_string())?;
    let cfg = SolverConfig::default();
    let neu = solve_spectrum(&curve, BoundaryCondition::Neumann, 13, None, &cfg)
        .map_err(|e| e.to_string())?;
    let dir = solve_spectrum(&curve, BoundaryCondition::Dirichlet, 6, None, &cfg)
        .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let exact_n = disk_spectrum(1.0, true, 13);
    let exact_d = disk_spectrum(1.0, false, 6);
    let err_n = neu
        .eigenvalues
        .iter()
        .zip(&exact_n)
        .skip(1)
        .map(|(a, b)| rel_err(*a, *b))
        .fold(0.0, f64::max);
    let zero = neu.eigenvalues[0].abs();
    let err_d = dir
        .eigenvalues
        .iter()
        .zip(&exact_d)
        .map(|(a, b)| rel_err(*a, *b))
        .fold(0.0, f64::max);
    // Quoted five-digit values, some truncated rather than rounded; the
    // quoted mu_4 = 9.32838 is off in the fifth decimal (true 9.328363) and is
    // only reported. The root tables above are the reference.
    let quoted = [(1, 3.38996), (5, 14.68197), (6, 17.64998), (7, 17.64998)];
    let quoted_ok = quoted
        .iter()
        .all(|&(i, v)| (neu.eigenvalues[i] - v).abs() <= 1e-5)
        && [(0, 5.78319), (1, 14.68197), (2, 14.68197)]
            .iter()
            .all(|&(i, v)| (dir.eigenvalues[i] - v).abs() <= 1e-5);
    let ok = err_n <= 1e-7 && err_d <= 1e-7 && zero <= 1e-7 && quoted_ok && secs <= 60.0;
    Ok((
        ok,
        format!("neumann rel {err_n:.1e} (mu_1 {zero:.1e}), dirichlet rel {err_d:.1e}, mu_4 = {:.6}, {secs:.1} s", neu.eigenvalues[3]),
    ))
}

fn overdetermined_disk() -> Outcome {
    let r = run_task(
        Task::DiskReference,
        CurveSpec::circle(3.83171).unwrap(),
        512,
    )?;
    let ok = steps_pass(
        &r,
        &[
            "omega_neumann_trace",
            "omega_dirichlet_constant",
            "mu_over_mu8",
        ],
    )?;
    let s = r.step("omega_neumann_trace").unwrap();
    Ok((
        ok,
        format!(
            "neumann sup {}, mu/mu8 {}",
            s.computed, r.invariants["mu_over_mu8"]
        ),
    ))
}

fn commutation() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (label, spec) in [
        ("circle", CurveSpec::circle(1.0).unwrap()),
        ("ellipse 1.5", CurveSpec::ellipse(1.5, 1.0).unwrap()),
    ] {
        let r = run_task(Task::TraceValidation, spec, 512)?;
        ok &= steps_pass(&r, &["commutation"])?;
        detail.push(format!(
            "{label} {}",
            r.step("commutation").unwrap().computed["max"]
        ));
    }
    Ok((ok, format!("max residual: {}", detail.join(", "))))
}

fn trace_tables() -> Outcome {
    let r = run_task(Task::TraceValidation, CurveSpec::circle(1.0).unwrap(), 512)?;
    let ok = steps_pass(&r, &["tables_vs_composition", "tables_vs_disk_analytic"])?;
    Ok((
        ok,
        format!(
            "table vs composition {}, table vs analytic {}",
            r.step("tables_vs_composition").unwrap().computed,
            r.step("tables_vs_disk_analytic").unwrap().computed
        ),
    ))
}

fn gram_verdicts() -> Outcome {
    let e = |x: schiffer_core::Error| x.to_string();
    let curves = [
        CurveSpec::ellipse(1.2, 1.0).unwrap(),
        CurveSpec::ellipse(1.5, 1.0).unwrap(),
        oval(),
        fourier(&[(1, 1.0, 0.0), (-2, 0.1, 0.0)]),
        fourier(&[
            (1, 1.0, 0.0),
            (-1, 0.1, 0.05),
            (2, 0.03, 0.0),
            (-3, 0.02, -0.01),
        ]),
    ];
    let mut w2_ok = 0;
    for spec in &curves {
        let c = build_curve(spec, 512).map_err(e)?;
        let g = gram_on_subspace(&c, &SubspaceBasis::w2_thm31(&c).map_err(e)?, 1.0).map_err(e)?;
        w2_ok += g.verdict as usize;
    }
    let symmetric = [
        CurveSpec::ellipse(1.3, 1.0).unwrap(),
        oval(),
        fourier(&[(1, 1.0, 0.0), (-1, 0.15, 0.0), (3, 0.03, 0.0)]),
    ];
    let (mut cross, mut diag_max) = (0.0f64, f64::NEG_INFINITY);
    for spec in &symmetric {
        let c = build_curve(spec, 512).map_err(e)?;
        let g = gram_on_subspace(&c, &SubspaceBasis::w2_thm34(&c).map_err(e)?, 1.0).map_err(e)?;
        cross = cross.max(g.block_max(0..3, 3..5));
        diag_max = diag_max.max(g.entry(3, 3).re).max(g.entry(4, 4).re);
    }
    let c = build_curve(&CurveSpec::ellipse(1.5, 1.0).unwrap(), 512).map_err(e)?;
    let g = gram_on_subspace(&c, &SubspaceBasis::w2_thm31(&c).map_err(e)?, 1.0).map_err(e)?;
    let entry_dev = (g.entry(0, 0) - w2_theta_gram(64)[(0, 0)]).norm();
    let ok = w2_ok == curves.len() && cross <= 1e-9 && diag_max <= 0.0 && entry_dev <= 1e-9;
    Ok((
        ok,
        format!(
            "W2 semi-negative on {w2_ok}/{} curves, V1-V2 block {cross:.1e}, V2 diagonal max {diag_max:.3e}, (1,0,0) entry dev {entry_dev:.1e}",
            curves.len()
        ),
    ))
}

fn green_reduction() -> Outcome {
    let spec = CurveSpec::ellipse(1.4, 0.9).unwrap();
    let c = build_curve(&spec, 512).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let u = PlaneWaves::single(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let v = PlaneWaves::single(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let b = boundary_b(&c, &trace_of_field(&c, &u), &trace_of_field(&c, &v))
            .map_err(|e| e.to_string())?;
        let integrand = |p: Complex64| {
            let (gu, gv) = (u.gradient(p), v.gradient(p));
            gu[0] * gv[0].conj() + gu[1] * gv[1].conj() - u.value(p) * v.value(p).conj()
        };
        let interior = star_integral(&spec, Complex64::new(0.0, 0.0), 24, 256, integrand)
            .map_err(|e| e.to_string())?;
        worst = worst.max((b - interior).norm());
    }
    Ok((
        worst <= 1e-6,
        format!("10 pairs, max |boundary - interior| {worst:.1e}"),
    ))
}

fn nodal_suite() -> Outcome {
    let r = run_task(Task::NodalSuite, CurveSpec::circle(1.0).unwrap(), 512)?;
    let names = [
        "disk_mode_1",
        "disk_mode_2",
        "disk_mode_3",
        "disconnected_synthetic",
        "courant",
        "euler_on_clean_extractions",
        "sturm_random",
    ];
    let ok = steps_pass(&r, &names)?;
    let failed: Vec<&str> = r
        .steps
        .iter()
        .filter(|s| !s.pass)
        .map(|s| s.name.as_str())
        .collect();
    Ok((ok, format!("{} steps, failed: {failed:?}", r.steps.len())))
}

fn invariance() -> Outcome {
    let cases = [
        (Task::Theorem34Chain, oval()),
        (Task::Theorem31Chain, CurveSpec::ellipse(1.2, 1.0).unwrap()),
        (
            Task::TraceValidation,
            fourier(&[(1, 1.0, 0.0), (-2, 0.1, 0.0)]),
        ),
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut ok = true;
    for (task, spec) in cases {
        let base = run_task(task, spec.clone(), 512)?;
        ok &= base.overall_verdict;
        for moved in [
            spec.rotated(0.7),
            spec.scaled(1.7),
            spec.rotated(-2.1).scaled(0.6),
        ] {
            let r = run_task(task, moved, 512)?;
            if r.invariants.keys().ne(base.invariants.keys()) {
                return Ok((false, format!("{task:?}: invariant names differ")));
            }
            for (k, v) in &base.invariants {
                worst = worst.max((r.invariants[k] - v).abs() / v.abs().max(1.0));
                count += 1;
            }
        }
    }
    Ok((
        ok && worst <= 1e-8,
        format!("{count} comparisons, max deviation {worst:.1e}"),
    ))
}

fn determinism() -> Outcome {
    let mut same = true;
    for (task, spec) in [
        (Task::TraceValidation, CurveSpec::ellipse(1.5, 1.0).unwrap()),
        (Task::Theorem31Chain, CurveSpec::ellipse(1.2, 1.0).unwrap()),
        (Task::NodalSuite, CurveSpec::ellipse(1.2, 1.0).unwrap()),
    ] {
        let a = run_task(task, spec.clone(), 512)?
            .to_json()
            .map_err(|e| e.to_string())?;
        let b = run_task(task, spec, 512)?
            .to_json()
            .map_err(|e| e.to_string())?;
        same &= a == b;
    }
    Ok((
        same,
        "report.json identical across repeated runs of three tasks".into(),
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("disk spectra", disk_spectra),
        ("overdetermined disk solution", overdetermined_disk),
        ("trace-operator commutation", commutation),
        ("trace tables", trace_tables),
        ("gram verdicts", gram_verdicts),
        ("green-formula reduction", green_reduction),
        ("nodal suite", nodal_suite),
        ("scale/rotation invariance", invariance),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += !pass as usize;
        println!(
            "{} {}. {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
