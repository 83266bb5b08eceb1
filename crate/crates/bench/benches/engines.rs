use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use matbeta::integrate::{quad_1d, QuadOptions};
use matbeta::lattice::{enumerate_lattices, zeta_lhs_partial, ZetaParams, DEFAULT_CAP};
use matbeta::rayleigh::interp_beta_mc;
use matbeta::special::{ln_gamma, selberg_closed_form, SelbergParams, SelbergVariant};
use matbeta::symmetric::hua::{hua_symm_mc, hua_symm_quadrature};
use matbeta::Complex64;

fn special(c: &mut Criterion) {
    c.bench_function("ln_gamma complex", |b| b.iter(|| ln_gamma(black_box(Complex64::new(3.7, -2.1)))));
    c.bench_function("selberg closed form n=8", |b| {
        let p = SelbergParams::real(8, 2.0, 3.0, 0.7);
        b.iter(|| selberg_closed_form(SelbergVariant::UnitBox, black_box(&p)))
    });
}

fn quadrature(c: &mut Criterion) {
    let opts = QuadOptions::default().with_rel_tol(1e-10);
    c.bench_function("quad_1d euler", |b| {
        b.iter(|| quad_1d(|t| t.powf(1.5) * (1.0 - t).powf(2.5), 0.0, 1.0, black_box(&opts)))
    });
    let opts = QuadOptions::default().with_rel_tol(1e-6);
    c.bench_function("hua-symm quadrature n=2", |b| b.iter(|| hua_symm_quadrature(2, 2.0, 2.0, black_box(&opts))));
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte carlo");
    g.sample_size(10);
    for n in [2, 3] {
        g.bench_with_input(BenchmarkId::new("hua-symm 100k", n), &n, |b, &n| {
            b.iter(|| hua_symm_mc(n, 2.0, 2.0, 100_000, 1))
        });
    }
    g.bench_function("rayleigh-d 100k", |b| b.iter(|| interp_beta_mc(&[3.0, 3.0], &[3.0, 3.0], 1.0, 100_000, 1)));
    g.finish();
}

fn lattices(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattices");
    g.sample_size(10);
    g.bench_function("enumerate n=2 B=32", |b| b.iter(|| enumerate_lattices(2, 32, DEFAULT_CAP).unwrap().count()));
    let p = ZetaParams::new(vec![10.0, 7.0], vec![-5.0, -4.0]).unwrap();
    g.bench_function("zeta partial n=2 B=32", |b| b.iter(|| zeta_lhs_partial(&p, 32, DEFAULT_CAP)));
    g.finish();
}

criterion_group!(benches, special, quadrature, monte_carlo, lattices);
criterion_main!(benches);
