use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use osclab_core::covering::{build_covering, covering_theta};
use osclab_core::poly::log_norms;
use osclab_core::search::evaluate;
use osclab_core::{ConvexDomain, Exponent, QuadratureGrid, RootPolynomial};

fn roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let t = j as f64 / n as f64;
            Complex64::new(0.5 + 0.3 * (7.0 * t).cos(), 0.5 + 0.3 * (11.0 * t).sin())
        })
        .collect()
}

fn bench_norms(c: &mut Criterion) {
    let k = ConvexDomain::unit_square();
    let grid = QuadratureGrid::default_for(&k);
    for n in [8, 64] {
        let p = RootPolynomial::monic(roots(n));
        c.bench_function(&format!("log_norms q=2 n={n}"), |b| {
            b.iter(|| log_norms(black_box(&p), &k, Exponent::Finite(2.0), &grid))
        });
    }
}

fn bench_chord(c: &mut Criterion) {
    let k = ConvexDomain::regular_polygon(9, 1.0).unwrap();
    let z = k.boundary_point(0.3).z;
    c.bench_function("chord on 9-gon", |b| b.iter(|| k.chord(black_box(z), black_box(1.234))));
}

fn bench_covering(c: &mut Criterion) {
    let k = ConvexDomain::unit_square();
    let r = 0.5 * k.width() / 108.0;
    let theta = covering_theta(&k);
    let mut g = c.benchmark_group("covering");
    g.sample_size(10);
    g.bench_function("square r=w/216", |b| b.iter(|| build_covering(&k, black_box(r), theta).unwrap()));
    g.finish();
}

fn bench_search_eval(c: &mut Criterion) {
    let k = ConvexDomain::rectangle(3.0, 1.0);
    let grid = QuadratureGrid::default_for(&k);
    let rs: Vec<Complex64> = roots(16).into_iter().map(|z| Complex64::new(3.0 * z.re, z.im)).collect();
    c.bench_function("search evaluate n=16", |b| b.iter(|| evaluate(&k, black_box(&rs), Exponent::Finite(2.0), &grid)));
}

criterion_group!(benches, bench_norms, bench_chord, bench_covering, bench_search_eval);
criterion_main!(benches);
