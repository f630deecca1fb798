use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symquad_bench::{one_attempt, quad_problem, sample_points, tet_problem};
use symquad_core::solver::{clamp_params, levenberg_marquardt_projected};
use symquad_core::{enumerate_decompositions, search, DomainKind, OrthoBasis, SolverConfig};

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("basis_eval");
    for kind in DomainKind::ALL {
        let pts = sample_points(kind, 6);
        let basis = OrthoBasis::<f64>::full(kind, 10);
        let mut out = vec![0.0; basis.len()];
        g.bench_function(BenchmarkId::from_parameter(kind.short_name()), |b| {
            b.iter(|| {
                for p in &pts {
                    basis.eval_into(black_box(p), &mut out);
                }
                black_box(&out);
            })
        });
    }
    g.finish();
}

fn residual(c: &mut Criterion) {
    let mut g = c.benchmark_group("residual");
    for (name, p) in [
        ("quad-q5-n8", quad_problem()),
        ("tet-q7-n35", tet_problem()),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| black_box(p.residual.evaluate(black_box(&p.params))))
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    c.bench_function("enumerate/pri-n80", |b| {
        b.iter(|| black_box(enumerate_decompositions(DomainKind::Prism, black_box(80))))
    });
}

fn minimization(c: &mut Criterion) {
    let mut g = c.benchmark_group("lm_attempt");
    g.sample_size(20);
    let cfg = SolverConfig::default();
    for (name, p) in [
        ("quad-q5-n8", quad_problem()),
        ("tet-q7-n35", tet_problem()),
    ] {
        let kind = p.residual.kind;
        let d = p.residual.decomposition.clone();
        g.bench_function(name, |b| {
            b.iter(|| {
                levenberg_marquardt_projected(
                    |x: &[f64]| Ok(p.residual.evaluate(x).0.as_slice().to_vec()),
                    |x: &mut [f64]| clamp_params(kind, &d, x),
                    &p.params,
                    &cfg,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

fn full_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let cfg = one_attempt();
    g.bench_function("tri-q5-n7", |b| {
        b.iter(|| search(DomainKind::Triangle, 7, 5, &cfg))
    });
    g.finish();
}

criterion_group!(
    benches,
    basis,
    residual,
    enumeration,
    minimization,
    full_search
);
criterion_main!(benches);
