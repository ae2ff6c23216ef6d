use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use schiffer_bench::ellipse;
use schiffer_core::bessel::{bessel_j, bessel_j_sequence, bessel_roots, RootKind};
use schiffer_core::bilinear::{gram_on_subspace, SubspaceBasis};
use schiffer_core::eigen::{solve_spectrum, BoundaryCondition, SolverConfig};
use schiffer_core::fields::{trace_of_field, PlaneWaves};
use schiffer_core::trace_ops::{apply_m, omega_trace_by_composition, OmegaTrace};
use std::hint::black_box;

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_j/order_5", |b| {
        b.iter(|| bessel_j(5, black_box(17.3)))
    });
    c.bench_function("bessel_j_sequence/order_40", |b| {
        b.iter(|| bessel_j_sequence(40, black_box(17.3)))
    });
    c.bench_function("bessel_roots/jp3_x5", |b| {
        b.iter(|| bessel_roots(3, RootKind::RootOfJnPrime, black_box(5)))
    });
}

fn traces(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace_ops");
    for n in [256, 1024] {
        let curve = ellipse(n);
        let t = trace_of_field(&curve, &PlaneWaves::single(1.0, 0.3));
        g.bench_with_input(BenchmarkId::new("apply_m", n), &n, |b, _| {
            b.iter(|| apply_m(&curve, black_box(&t)))
        });
        g.bench_with_input(BenchmarkId::new("omega_rrw_composition", n), &n, |b, _| {
            b.iter(|| omega_trace_by_composition(&curve, OmegaTrace::RRw))
        });
    }
    g.finish();
    let curve = ellipse(512);
    let basis = SubspaceBasis::w2_thm31(&curve).unwrap();
    c.bench_function("gram/w2_512", |b| {
        b.iter(|| gram_on_subspace(&curve, black_box(&basis), 1.0))
    });
}

fn eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigen");
    g.sample_size(10);
    let curve = ellipse(512);
    for order in [20, 30] {
        let cfg = SolverConfig {
            angular_order: order,
            ..SolverConfig::default()
        };
        g.bench_with_input(BenchmarkId::new("dirichlet_6", order), &cfg, |b, cfg| {
            b.iter(|| solve_spectrum(&curve, BoundaryCondition::Dirichlet, 6, None, cfg))
        });
    }
    g.finish();
}

criterion_group!(benches, bessel, traces, eigen);
criterion_main!(benches);
