//! Hot-path benchmarks: the special functions behind every observable, and
//! the state-level operations built on top of them.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use pdm_gk::gk::{build_state, resolution_of_unity_check, GkMoments};
use pdm_gk::model::{eigenfunction, ModelParams, Normalization};
use pdm_gk::specfun::{bessel_k_ln, gauss_legendre, hyp0f1, log_gamma};
use pdm_gk::stats::{wigner_fock, wigner_paper};

fn bench_specfun(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    g.bench_function("log_gamma", |b| {
        b.iter(|| log_gamma(black_box(27.3)).unwrap())
    });
    g.bench_function("hyp0f1", |b| {
        b.iter(|| hyp0f1(black_box(13.05), black_box(42.0)).unwrap())
    });
    g.bench_function("bessel_k_ln", |b| {
        b.iter(|| bessel_k_ln(black_box(12.05), black_box(3.5)).unwrap())
    });
    g.bench_function("gauss_legendre_64", |b| {
        b.iter(|| gauss_legendre(black_box(64), 0.0, 1.0).unwrap())
    });
    g.finish();
}

fn bench_model(c: &mut Criterion) {
    let params = ModelParams::with_alpha(0.2).unwrap();
    let phi = eigenfunction(&params, 10)
        .unwrap()
        .with_normalization(Normalization::XSpace);
    let mut g = c.benchmark_group("model");
    g.bench_function("eigenfunction_eval_n10", |b| {
        b.iter(|| phi.eval(black_box(1.3)))
    });
    g.finish();
}

fn bench_states(c: &mut Criterion) {
    let params = ModelParams::with_alpha(0.2).unwrap();
    let d = params.derive();
    let moments = GkMoments::adaptive(d.a, d.b, 5.0).unwrap();
    let state = build_state(&moments, 5.0, 0.0).unwrap();
    let z = Complex64::new(1.0, 0.5);

    let mut g = c.benchmark_group("states");
    g.bench_function("build_state_j5", |b| {
        b.iter(|| build_state(black_box(&moments), black_box(5.0), 0.0).unwrap())
    });
    g.bench_function("wigner_paper_point", |b| {
        b.iter(|| wigner_paper(black_box(&state), black_box(z)).unwrap())
    });
    g.bench_function("wigner_fock_point", |b| {
        b.iter(|| wigner_fock(black_box(&state), black_box(z)).unwrap())
    });
    g.sample_size(20);
    g.bench_function("unity_moment_n5", |b| {
        b.iter(|| resolution_of_unity_check(black_box(&moments), black_box(5)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_specfun, bench_model, bench_states);
criterion_main!(benches);
