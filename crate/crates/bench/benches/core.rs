use std::hint::black_box;

use ballgap::approx::{greedy_net, NetConfig};
use ballgap::ball::{cap_volume, log_gamma};
use ballgap::cone::{spherical_measure, umbrella_gap};
use ballgap::hull::convex_hull;
use ballgap::SimplexFacet;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn special_functions(c: &mut Criterion) {
    c.bench_function("log_gamma", |b| b.iter(|| log_gamma(black_box(7.3))));
    c.bench_function("cap_volume_d6", |b| b.iter(|| cap_volume(6, black_box(0.3))));
}

fn hulls(c: &mut Criterion) {
    let mut g = c.benchmark_group("convex_hull");
    g.sample_size(10);
    for (d, n) in [(3, 1000), (4, 400), (5, 200)] {
        let pts = greedy_net(&NetConfig::with_count(d, n, 1)).unwrap().points;
        g.bench_with_input(BenchmarkId::from_parameter(format!("d{d}_n{n}")), &pts, |b, pts| {
            b.iter(|| convex_hull(pts).unwrap())
        });
    }
    g.finish();
}

fn facet_integrals(c: &mut Criterion) {
    let facet = SimplexFacet::from_points(&[
        vec![0.9, 0.3, 0.2, 0.1],
        vec![0.2, 0.9, 0.3, 0.1],
        vec![0.1, 0.2, 0.9, 0.3],
        vec![0.3, 0.1, 0.2, 0.9],
    ])
    .unwrap();
    let mut g = c.benchmark_group("facet_mc_1e5");
    g.sample_size(20);
    g.bench_function("spherical_measure_d4", |b| b.iter(|| spherical_measure(&facet, 100_000, 1).unwrap()));
    g.bench_function("umbrella_gap_d4", |b| b.iter(|| umbrella_gap(&facet, 100_000, 1).unwrap()));
    g.finish();
}

fn nets(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy_net");
    g.sample_size(10);
    g.bench_function("d3_n500", |b| b.iter(|| greedy_net(&NetConfig::with_count(3, 500, 1)).unwrap()));
    g.finish();
}

criterion_group!(benches, special_functions, hulls, facet_integrals, nets);
criterion_main!(benches);
