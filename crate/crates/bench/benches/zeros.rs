use criterion::{black_box, criterion_group, criterion_main, Criterion};
use heun_core::families::{from_lame, LameParams};
use heun_core::recurrence::build_polynomial;
use heun_core::rootfind::{find_all_roots, zeros_of, RootOptions};
use heun_core::{Exact, RecurrenceSpec, Scalar};

fn whittaker_hill() -> RecurrenceSpec {
    RecurrenceSpec::confluent(Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar::int(5), Scalar::int(-20)).unwrap()
}

fn build(c: &mut Criterion) {
    let spec = whittaker_hill();
    c.bench_function("exact c_100, whittaker-hill s=-20", |b| {
        b.iter(|| build_polynomial(black_box(&spec), 100, Exact).unwrap())
    });
}

fn roots(c: &mut Criterion) {
    let lame = from_lame(&LameParams { n: Scalar::int(2), s: Scalar::ratio(1, 100), eta: None }).unwrap().spec;
    let opts = RootOptions::default();
    c.bench_function("zeros of c_30, lame s=1/100 (perturbative seeds)", |b| {
        b.iter(|| zeros_of(black_box(&lame), 30, &opts).unwrap())
    });

    let poly = build_polynomial(&whittaker_hill(), 100, Exact).unwrap().to_bigfloat(256);
    let mut group = c.benchmark_group("degree 100");
    group.sample_size(10);
    group.bench_function("aberth, whittaker-hill s=-20", |b| {
        b.iter(|| find_all_roots(black_box(&poly), None, 256, None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, build, roots);
criterion_main!(benches);
