use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use varcone::clarke::clarke_tangent_cone_with;
use varcone::oracle::{check_uts, SamplingParams};
use varcone::rational::ratio;
use varcone::{gallery, ExecMode, PolyhedralCone, UnionSet, Vector};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn orthant_union(dim: usize) -> UnionSet {
    let pieces = (0..dim)
        .map(|i| {
            let mut facets: Vec<Vector> = (0..dim).filter(|&j| j != i).map(|j| -Vector::unit(dim, j)).collect();
            facets.push(Vector::unit(dim, i) - Vector::unit(dim, (i + 1) % dim));
            PolyhedralCone::from_constraints(dim, &facets, &[]).unwrap()
        })
        .collect();
    UnionSet::cones(pieces).unwrap()
}

fn clarke_cone(c: &mut Criterion) {
    let mut group = c.benchmark_group("clarke_tangent_cone");
    group.sample_size(10);
    for dim in [3, 4] {
        let u = orthant_union(dim);
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, dim), &u, |b, u| {
                b.iter(|| clarke_tangent_cone_with(black_box(u), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("uts_oracle");
    group.sample_size(10);
    let set = gallery::wedge();
    let dirs = gallery::square_grid(4);
    let params = SamplingParams::new(ratio(1, 16), ratio(1, 8), ratio(1, 16), 200, 1);
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| check_uts(black_box(&set), set.basepoint(), &dirs, &params, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, clarke_cone, oracle_sweep);
criterion_main!(benches);
