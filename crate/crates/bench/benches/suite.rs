//! Criterion benchmarks for the qbio-core simulators.
//!
//! One benchmark per hot path: amplitude iteration, chain enumeration
//! (sequential and parallel), angle discretization, convergence detection and
//! the replication sweep. The inputs are fixed so runs are comparable.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qbio_core::evolution::{
    convergence_time, estimate_geometric_rate, ConvergenceParams, EvolutionMatrix,
    NegativityPolicy, PopulationVector,
};
use qbio_core::lattice::{
    count_conformations, count_conformations_parallel, discretize_angles, RamachandranPoint,
};
use qbio_core::search::{grover_iterate, optimal_queries, SearchProblem};

fn bench_search(c: &mut Criterion) {
    c.bench_function("grover_iterate_n64_optimal", |b| {
        let problem = SearchProblem::new(64, 21).unwrap();
        let q = optimal_queries(64).unwrap().q_int;
        b.iter(|| grover_iterate(black_box(problem), black_box(q)));
    });

    c.bench_function("optimal_queries_n4096", |b| {
        b.iter(|| optimal_queries(black_box(4096)).unwrap());
    });
}

fn bench_lattice(c: &mut Criterion) {
    c.bench_function("enumerate_5_units_trans", |b| {
        b.iter(|| count_conformations(black_box(5), false).unwrap());
    });

    c.bench_function("enumerate_6_units_trans_4_threads", |b| {
        b.iter(|| count_conformations_parallel(black_box(6), false, 4).unwrap());
    });

    c.bench_function("discretize_10k_angles", |b| {
        // A deterministic grid across the whole torus, stars included.
        let points: Vec<RamachandranPoint> = (0..100)
            .flat_map(|i| {
                (0..100).map(move |j| {
                    RamachandranPoint::new(-180.0 + 3.6 * i as f64, -180.0 + 3.6 * j as f64)
                        .unwrap()
                })
            })
            .collect();
        b.iter(|| {
            points
                .iter()
                .map(|&p| discretize_angles(p).distance_deg)
                .sum::<f64>()
        });
    });
}

/// Lazy random walk on a ring of eight species: stay with probability 1/2,
/// hop to either neighbour with probability 1/4.
fn ring_walk(n: usize) -> EvolutionMatrix {
    let mut entries = vec![vec![0.0; n]; n];
    for j in 0..n {
        entries[j][j] = 0.5;
        entries[(j + 1) % n][j] += 0.25;
        entries[(j + n - 1) % n][j] += 0.25;
    }
    EvolutionMatrix::stochastic(entries).unwrap()
}

fn bench_evolution(c: &mut Criterion) {
    let matrix = ring_walk(8);
    let mut phi = vec![0.0; 8];
    phi[0] = 1.0;
    let pop = PopulationVector::new(phi).unwrap();
    let params = ConvergenceParams::default();

    c.bench_function("convergence_ring_8", |b| {
        b.iter(|| convergence_time(black_box(&pop), &matrix, NegativityPolicy::Strict, params));
    });

    c.bench_function("geometric_rate_ring_8", |b| {
        b.iter(|| estimate_geometric_rate(black_box(&pop), &matrix).unwrap());
    });
}

fn bench_replication(c: &mut Criterion) {
    c.bench_function("hierarchy_sweep_20_points", |b| {
        let ratios: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
        b.iter(|| qbio_core::replication::hierarchy_sweep(4, 0, black_box(&ratios)).unwrap());
    });
}

fn bench_tables(c: &mut Criterion) {
    c.bench_function("validate_partition_canonical", |b| {
        let table = qbio_core::aminoacids::canonical_table();
        b.iter(|| qbio_core::aminoacids::validate_partition(black_box(table)).unwrap());
    });
}

criterion_group!(
    benches,
    bench_search,
    bench_lattice,
    bench_evolution,
    bench_replication,
    bench_tables
);
criterion_main!(benches);
