//! Rayon-parallel sweeps against their sequential fallbacks. The outputs
//! are asserted identical before timing; with the `parallel` feature off
//! both sides run the same sequential code.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use kcone::cones::{lemma24_scan, lemma24_scan_seq, min_over_sections, min_over_sections_seq};
use kcone::lattice::DivisorClass;
use kcone::threefold::{edge_orbit_census, edge_orbit_census_seq};

fn bench_lemma24_sweep(c: &mut Criterion) {
    assert_eq!(lemma24_scan(1), lemma24_scan_seq(1));
    let mut group = c.benchmark_group("lemma24_sweep_bound2");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| lemma24_scan(2)));
    group.bench_function("sequential", |b| b.iter(|| lemma24_scan_seq(2)));
    group.finish();
}

fn bench_section_minimum(c: &mut Criterion) {
    let classes = [
        DivisorClass::hyperplane(),
        DivisorClass::from_i64(4, [-2, -1, -1, 0, 0, 0, 0, 0, 0]),
        DivisorClass::from_i64(6, [-3, -2, -2, -1, -1, 0, 0, 0, 0]),
    ];
    for x in &classes {
        assert_eq!(min_over_sections(x).unwrap(), min_over_sections_seq(x).unwrap());
    }
    let mut group = c.benchmark_group("section_minimum");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || classes.clone(),
            |cs| cs.iter().map(|x| min_over_sections(x).unwrap().mu).collect::<Vec<_>>(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || classes.clone(),
            |cs| cs.iter().map(|x| min_over_sections_seq(x).unwrap().mu).collect::<Vec<_>>(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_census(c: &mut Criterion) {
    assert_eq!(edge_orbit_census(1), edge_orbit_census_seq(1));
    let mut group = c.benchmark_group("edge_census_bound1");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| edge_orbit_census(1)));
    group.bench_function("sequential", |b| b.iter(|| edge_orbit_census_seq(1)));
    group.finish();
}

criterion_group!(benches, bench_lemma24_sweep, bench_section_minimum, bench_census);
criterion_main!(benches);
