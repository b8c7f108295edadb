use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use thinlab_core::congruence::{congruence_graph, graph_spectrum, ClosureOptions, SpectrumOptions};
use thinlab_core::diophantine::{apollonian_orbit, zaremba_scan, ApollonianOptions};
use thinlab_core::exact::charpoly;
use thinlab_core::group::{ball_enumerate, BallOptions};
use thinlab_core::monodromy::{build_monodromy, family_catalog, Family};
use thinlab_core::rotation::{gamma_generators, tsigma_gap};
use thinlab_core::GenSet;

fn closure(c: &mut Criterion) {
    let s = GenSet::sl2_standard();
    c.bench_function("closure sl2 q=31", |b| {
        b.iter(|| congruence_graph(&s, black_box(31), &ClosureOptions::default()).unwrap())
    });
}

fn lanczos(c: &mut Criterion) {
    let s = GenSet::sl2_standard();
    let (_, graph) = congruence_graph(&s, 23, &ClosureOptions::default()).unwrap();
    let graph = graph.unwrap();
    let opts = SpectrumOptions {
        dense_check_limit: 0,
        ..SpectrumOptions::default()
    };
    c.bench_function("lanczos sl2 q=23", |b| {
        b.iter(|| graph_spectrum(&graph, &opts).unwrap())
    });
}

fn exact(c: &mut Criterion) {
    let t = build_monodromy(&family_catalog(Family::Dwork, 4).unwrap()).unwrap();
    let m = &t.a * &t.c;
    c.bench_function("charpoly rank 4", |b| b.iter(|| charpoly(black_box(&m))));
    let s = GenSet::sl2_standard();
    c.bench_function("ball sl2 radius 8", |b| {
        b.iter(|| ball_enumerate(&s, black_box(8), &BallOptions::default()).unwrap())
    });
}

fn arithmetic(c: &mut Criterion) {
    c.bench_function("zaremba A=2 Q=5000", |b| {
        b.iter(|| zaremba_scan(2, black_box(5000)).unwrap())
    });
    c.bench_function("apollonian bound 2000", |b| {
        b.iter(|| apollonian_orbit([-1, 2, 2, 3], black_box(2000), &ApollonianOptions::default()).unwrap())
    });
}

fn rotation(c: &mut Criterion) {
    let s = gamma_generators(3, 3).unwrap();
    c.bench_function("rotation gap lmax 10", |b| {
        b.iter(|| tsigma_gap(&s, black_box(10)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = closure, lanczos, exact, arithmetic, rotation
}
criterion_main!(benches);
