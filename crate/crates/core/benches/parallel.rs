use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use treejacobi::exactmath::{gaussian, int, rat};
use treejacobi::par::Execution;
use treejacobi::solutions::{side_ratios, solve_pair_with};
use treejacobi::tree::{generate, Coefficients, PathSelection, Shape};
use treejacobi::treepoly::PolyFamily;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn coefficients() -> Coefficients<'static> {
    Coefficients::new(|s| rat(s.level as i64 + 1, s.child_index as i64 + 1), |s| rat(s.child_index as i64 - 1, 2))
}

fn poly_family(c: &mut Criterion) {
    let mut group = c.benchmark_group("poly_family");
    group.sample_size(10);
    for depth in [3, 4] {
        let t = generate(Shape::Homogeneous { arity: 2, depth }, &coefficients()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, t.len()), &t, |b, t| {
                b.iter(|| PolyFamily::build_with(black_box(t), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn solutions(c: &mut Criterion) {
    let z = gaussian(int(0), int(1));
    let mut group = c.benchmark_group("solutions");
    group.sample_size(10);
    for depth in [5, 6] {
        let t = generate(Shape::Homogeneous { arity: 3, depth }, &coefficients()).unwrap();
        let path = PathSelection::leftmost(&t).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(format!("side_ratios/{name}"), t.len()), &t, |b, t| {
                b.iter(|| side_ratios(black_box(t), &path, &z, exec).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("solve_pair/{name}"), t.len()), &t, |b, t| {
                b.iter(|| solve_pair_with(black_box(t), &path, &z, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, poly_family, solutions);
criterion_main!(benches);
