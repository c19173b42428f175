//! Benchmarks for the paths whose cost actually varies with input size:
//! closed-form construction and verification, the two enumerators, symbolic
//! certificates, inventory synthesis, count composition, tower reports, and
//! the grid pushforward.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use razak_forge_core::blocks::{
    compose_counts, derive_unital_obstruction, synthesize_inventory, MapCounts,
};
use razak_forge_core::rank::{pushforward, AxisMap, Grid, RankFunction};
use razak_forge_core::solve::{
    enumerate_corrected, enumerate_unital, family, verify_family_symbolic, EnumerateOptions,
    SearchBounds,
};
use razak_forge_core::tower::{
    build, perforation_report, DPolicy, ReportOptions, Schedule, StageParams, UPolicy,
};

fn family_and_verify(c: &mut Criterion) {
    c.bench_function("family(3,4,2)", |b| {
        b.iter(|| family(black_box(3), 4, 2).unwrap())
    });
    let inst = family(3, 4, 2).unwrap();
    c.bench_function("verify corrected instance", |b| {
        b.iter(|| black_box(&inst).verify())
    });
    c.bench_function("family sweep 20^3", |b| {
        b.iter(|| {
            for s in 1..=20 {
                for k in 1..=20 {
                    for u in 1..=20 {
                        assert!(family(s, k, u).unwrap().verify().ok);
                    }
                }
            }
        })
    });
}

fn symbolic_certificates(c: &mut Criterion) {
    c.bench_function("family residuals", |b| b.iter(verify_family_symbolic));
    c.bench_function("unital collapse certificate", |b| {
        b.iter(derive_unital_obstruction)
    });
}

fn enumeration(c: &mut Criterion) {
    let opts = EnumerateOptions::default();
    let unital_box = SearchBounds::grid(6, 6, 60, 5);
    c.bench_function("enumerate unital k,l<=6 m<=60 s<=5", |b| {
        b.iter(|| enumerate_unital(black_box(&unital_box), &opts).unwrap())
    });
    let corrected_box = SearchBounds::grid(2, 5, 12, 2);
    c.bench_function("enumerate corrected k<=2 l<=5 m<=12 s<=2", |b| {
        b.iter(|| enumerate_corrected(black_box(&corrected_box), &opts).unwrap())
    });
}

fn inventories(c: &mut Criterion) {
    let inst = family(2, 3, 2).unwrap();
    c.bench_function("synthesize inventory p=76", |b| {
        b.iter(|| synthesize_inventory(black_box(&inst)).unwrap())
    });
    let inventory = synthesize_inventory(&inst).unwrap();
    c.bench_function("profile and admissibility", |b| {
        b.iter(|| {
            let verdict = black_box(&inventory).check_admissible();
            assert!(verdict.admissible);
        })
    });

    let inner = family(1, 2, 1).unwrap();
    let outer = family(1, inner.ell, 2).unwrap();
    let inner_counts = MapCounts::from_instance(&inner).unwrap();
    let outer_counts = MapCounts::from_instance(&outer).unwrap();
    c.bench_function("compose counts", |b| {
        b.iter(|| compose_counts(black_box(&outer_counts), black_box(&inner_counts)).unwrap())
    });
}

fn towers(c: &mut Criterion) {
    let schedule = Schedule {
        k1: 2,
        params: StageParams::Policy {
            u: UPolicy::TimesK(1),
            s: 1,
        },
        d_policy: DPolicy::IncludeFlipped,
    };
    c.bench_function("build tower 25 stages", |b| {
        b.iter(|| build(black_box(&schedule), 25).unwrap())
    });
    let stages = build(&schedule, 25).unwrap();
    let options = ReportOptions::default();
    c.bench_function("perforation report 25 stages", |b| {
        b.iter(|| perforation_report(black_box(&stages), &options).unwrap())
    });
}

fn pushforwards(c: &mut Criterion) {
    let inst = family(1, 1, 1).unwrap();
    let inventory = synthesize_inventory(&inst).unwrap();
    let grid = Grid::new(1, 5).unwrap();
    let values: Vec<u64> = (0..grid.points()).map(|i| i % 7).collect();
    let witness = RankFunction::new(grid, values, 6).unwrap();
    let axis_map = AxisMap::canonical(&inventory, &grid);
    c.bench_function("pushforward p=11 onto 5^5 grid", |b| {
        b.iter(|| pushforward(black_box(&witness), &inventory, &axis_map).unwrap())
    });
}

criterion_group!(
    benches,
    family_and_verify,
    symbolic_certificates,
    enumeration,
    inventories,
    towers,
    pushforwards
);
criterion_main!(benches);
