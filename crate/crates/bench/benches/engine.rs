use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use extquot_core::abgroup::{smith_normal_form, IntegerMatrix};
use extquot_core::langlands::fiber_count;
use extquot_core::{Coordinate, ExtendedQuotient, Scenario, ValueGroup};

fn snf(c: &mut Criterion) {
    let m = IntegerMatrix::from_rows(&[
        [4, -6, 8, 2, 0, 9],
        [3, 7, -1, 5, 8, -2],
        [-9, 2, 4, 6, -3, 1],
        [1, 1, 2, 3, 5, 8],
        [6, -4, 0, 2, 7, -5],
        [2, 9, -7, 1, 3, 4],
    ])
    .unwrap();
    c.bench_function("snf_6x6", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn classes(c: &mut Criterion) {
    let s = Scenario::preset("gl6").unwrap();
    c.bench_function("conjugacy_classes_gl6", |b| b.iter(|| black_box(&s.group).conjugacy_classes()));
}

fn extended_quotient(c: &mut Criterion) {
    let mut g = c.benchmark_group("extended_quotient");
    for name in ["gl4", "gl5", "g2_full", "g2_ramified"] {
        let s = Scenario::preset(name).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| b.iter(|| ExtendedQuotient::build(s)));
    }
    g.finish();
}

fn fibers(c: &mut Criterion) {
    let vg = ValueGroup::default();
    let mut g = c.benchmark_group("fiber_count");
    for text in ["qh^2,1,qh^-2", "qh^3,qh,qh^-1,qh^-3,qh,qh^-1", "z*qh,z*qh^-1,qh^2,1,1,qh^-2"] {
        let sigma: Vec<Coordinate> = vg.parse_coordinate_list(text).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(text), &sigma, |b, s| b.iter(|| fiber_count(s)));
    }
    g.finish();
}

criterion_group!(benches, snf, classes, extended_quotient, fibers);
criterion_main!(benches);
