use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use novikov_core::lp::harness::{default_grid, moser_family, DEFAULT_SEED};
use novikov_core::lp::{BlockDecomposition, BlockKind, SpaceParams};
use novikov_core::spectral::{Grid, GridFunction};
use novikov_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn blocks(c: &mut Criterion) {
    let grid = Grid::new(32.0, 1 << 14).unwrap();
    let f = GridFunction::from_fn(&grid, |x| (-(x * x)).exp() * (40.0 * x).sin());
    let mut group = c.benchmark_group("block_decomposition");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| BlockDecomposition::with(&f, BlockKind::Inhomogeneous, e))
        });
    }
    group.finish();
}

fn harness(c: &mut Criterion) {
    let grid = default_grid();
    let params = SpaceParams::triebel_lizorkin(2.0, 2.0, 2.0);
    let mut group = c.benchmark_group("moser_family_16");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| moser_family(&grid, &params, DEFAULT_SEED, 16, e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, blocks, harness);
criterion_main!(benches);
