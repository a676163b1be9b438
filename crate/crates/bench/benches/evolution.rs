use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use itegrad::evolution::{ite_step, rgd_step, rgd_trajectory, srgd_step, srgd_trajectory};
use itegrad::PauliBasis;
use itegrad_bench::{ising_chain, schedule, start};

fn single_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for n in [1usize, 2, 3, 4] {
        let h = ising_chain(n, 0.7);
        let psi = start(n);
        let basis = PauliBasis::full(n).unwrap();
        group.bench_with_input(BenchmarkId::new("ite", n), &n, |b, _| {
            b.iter(|| ite_step(&h, black_box(&psi), 0.01).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rgd", n), &n, |b, _| {
            b.iter(|| rgd_step(&h, black_box(&psi), 0.01).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("srgd", n), &n, |b, _| {
            b.iter(|| srgd_step(&h, black_box(&psi), 0.01, 1, &basis, 1).unwrap())
        });
    }
    group.finish();
}

fn trajectories(c: &mut Criterion) {
    let mut group = c.benchmark_group("trajectory");
    group.sample_size(10);
    let h = ising_chain(3, 0.7);
    let psi = start(3);
    let sched = schedule(1.0, 100);
    let basis = PauliBasis::full(3).unwrap();
    group.bench_function("rgd_n3_100", |b| {
        b.iter(|| rgd_trajectory(&h, &psi, sched).unwrap())
    });
    group.bench_function("srgd_n3_100", |b| {
        b.iter(|| srgd_trajectory(&h, &psi, sched, &basis, black_box(5)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, single_steps, trajectories);
criterion_main!(benches);
