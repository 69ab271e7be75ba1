//! Parallel vs sequential throughput of the data-parallel sweeps.
//!
//! Build with default features to compare the rayon-backed sweep against
//! the sequential fallback; without the `parallel` feature both entries
//! run the sequential path.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;

use mex_core::instances::wheel;
use mex_core::oracle::{conjecture_sweep, conjecture_sweep_serial, Limits};
use mex_core::weight::WeightFn;
use mex_core::wheel::solve_wheel;

fn sweep_samples(n: usize) -> Vec<WeightFn> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    (0..4)
        .map(|_| WeightFn::sample(&mut rng, n, 10, 10))
        .collect()
}

fn bench_conjecture_sweep(c: &mut Criterion) {
    let w = wheel(5).unwrap();
    let samples = sweep_samples(8);
    let limits = Limits::default();
    let mut group = c.benchmark_group("conjecture_sweep_wheel5");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| conjecture_sweep(&w, &samples, &limits).unwrap())
    });
    group.bench_function("serial", |b| {
        b.iter(|| conjecture_sweep_serial(&w, &samples, &limits).unwrap())
    });
    group.finish();
}

fn bench_wheel_solver(c: &mut Criterion) {
    let w = wheel(6).unwrap();
    let unit = WeightFn::unit(10);
    let colorings = w.colorings();
    let mut group = c.benchmark_group("solve_wheel_all_pairs_wheel6");
    group.sample_size(10);
    group.bench_function("rayon", |b| {
        use rayon::prelude::*;
        b.iter(|| {
            colorings
                .par_iter()
                .map(|p1| {
                    colorings
                        .iter()
                        .map(|p2| solve_wheel(&w, p1, p2, &unit).unwrap().len())
                        .sum::<usize>()
                })
                .sum::<usize>()
        })
    });
    group.bench_function("serial", |b| {
        b.iter(|| {
            colorings
                .iter()
                .map(|p1| {
                    colorings
                        .iter()
                        .map(|p2| solve_wheel(&w, p1, p2, &unit).unwrap().len())
                        .sum::<usize>()
                })
                .sum::<usize>()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_conjecture_sweep, bench_wheel_solver);
criterion_main!(benches);
