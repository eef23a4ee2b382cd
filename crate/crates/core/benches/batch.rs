//! Parallel versus sequential batch work over seeded corpora.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paritylab::corpus::{gen_game, gen_lasso, GenSpec, Parity};
use paritylab::reg::{solve_reg, RegSpec};
use paritylab::solve::{solve, Solver};
use paritylab::{par, ParityGame, Player, PriorityIndex, DEFAULT_STATE_CAP};

fn games(count: u64, size: usize) -> Vec<ParityGame> {
    (0..count)
        .map(|seed| gen_game(&GenSpec::new(seed, size).with_branching(4)).unwrap())
        .collect()
}

fn solve_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_batch");
    for size in [50, 400] {
        let batch = games(64, size);
        let one = |g: &ParityGame| solve(g, Solver::Zielonka).winner(0);
        group.bench_with_input(BenchmarkId::new("sequential", size), &batch, |b, batch| {
            b.iter(|| par::map_seq(black_box(batch), one))
        });
        group.bench_with_input(BenchmarkId::new("parallel", size), &batch, |b, batch| {
            b.iter(|| par::map(black_box(batch), one))
        });
    }
    group.finish();
}

fn reg_batch(c: &mut Criterion) {
    let index = PriorityIndex::new(0, 3).unwrap();
    let lassos: Vec<ParityGame> = (0..32)
        .map(|seed| gen_lasso(&GenSpec::new(seed, 8).with_index(index), Parity::Odd).unwrap())
        .collect();
    let spec = RegSpec::new(index, PriorityIndex::new(2, 5).unwrap(), 2).unwrap();
    let one = |g: &ParityGame| solve_reg(g, &spec, Solver::Zielonka, DEFAULT_STATE_CAP).unwrap().winner == Player::Adam;
    let mut group = c.benchmark_group("reg_batch");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| par::map_seq(black_box(&lassos), one)));
    group.bench_function("parallel", |b| b.iter(|| par::map(black_box(&lassos), one)));
    group.finish();
}

criterion_group!(benches, solve_batch, reg_batch);
criterion_main!(benches);
