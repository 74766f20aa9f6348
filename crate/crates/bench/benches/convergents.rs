use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pcf_core::analysis::tietze_check;
use pcf_core::rational::{int, parse_rational};
use pcf_core::transforms::{euler_from_series, even_part, SeriesSpec};
use pcf_core::{brouncker_cf, e_cf, evaluate_terms};

fn convergents(c: &mut Criterion) {
    let mut g = c.benchmark_group("convergents");
    for n in [100usize, 1000, 4000] {
        g.bench_with_input(BenchmarkId::new("e", n), &n, |b, &n| {
            b.iter(|| e_cf().convergents(black_box(n)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("brouncker", n), &n, |b, &n| {
            b.iter(|| brouncker_cf().convergents(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let tol = parse_rational("1e-3").unwrap();
    let mut g = c.benchmark_group("evaluate_terms");
    g.sample_size(10);
    g.bench_function("brouncker-10000", |b| {
        b.iter(|| evaluate_terms(&brouncker_cf(), 10_000, &tol, 128).unwrap())
    });
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let series = SeriesSpec::from_fn(200, |n| int(1) / int((n as i64 + 1).pow(2)));
    c.bench_function("euler-200", |b| {
        b.iter(|| euler_from_series(black_box(&series)).unwrap())
    });
    let e = e_cf();
    c.bench_function("even-part-200", |b| b.iter(|| even_part(black_box(&e), 200).unwrap()));
}

fn tietze(c: &mut Criterion) {
    c.bench_function("tietze-e-1000", |b| {
        b.iter(|| tietze_check(&e_cf(), black_box(1000)).unwrap())
    });
}

criterion_group!(benches, convergents, evaluation, transforms, tietze);
criterion_main!(benches);
