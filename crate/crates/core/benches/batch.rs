//! Sequential vs rayon execution on the batch kernels: cone-Lipschitz rank
//! and minimal-point filtering over large ground sets, and sampled Hausdorff
//! distances over dense direction grids.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;

use conegen::instances::rng;
use conegen::lattice::{hausdorff_distance_with, DEFAULT_SEED};
use conegen::penalty::{cone_lipschitz_rank, cone_minimal_points};
use conegen::{AmbientNorm, Execution, GerstewitzFn, PolyhedralCone, Vector};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn ground_set(size: usize) -> (Vec<Vector>, Vec<Vector>) {
    let mut r = rng(42);
    let points: Vec<Vector> = (0..size)
        .map(|_| Vector::new(vec![r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).unwrap())
        .collect();
    let values = points
        .iter()
        .map(|p| {
            Vector::new(vec![
                p[0] + 0.3 * (3.0 * p[1]).sin(),
                p[1] - 0.3 * (2.0 * p[0]).cos(),
                p[0] * p[1],
            ])
            .unwrap()
        })
        .collect();
    (points, values)
}

fn penalty_kernels(c: &mut Criterion) {
    let cone = PolyhedralCone::coordinate(3).unwrap();
    let e = Vector::new(vec![1.0 / 3f64.sqrt(); 3]).unwrap();
    let scal = GerstewitzFn::new(cone.clone(), e).unwrap();
    let norm = AmbientNorm::euclidean();
    let mut group = c.benchmark_group("penalty");
    group.sample_size(10);
    for size in [500, 2000] {
        let (points, values) = ground_set(size);
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(format!("rank/{name}"), size),
                &size,
                |b, _| {
                    b.iter(|| {
                        cone_lipschitz_rank(black_box(&points), &values, &scal, &norm, exec)
                            .unwrap()
                    })
                },
            );
            group.bench_with_input(
                BenchmarkId::new(format!("minimal/{name}"), size),
                &size,
                |b, _| {
                    b.iter(|| {
                        cone_minimal_points(black_box(&values), &cone, 1e-9, 1e-8, exec).unwrap()
                    })
                },
            );
        }
    }
    group.finish();
}

fn hausdorff_kernel(c: &mut Criterion) {
    let mut r = rng(43);
    let cloud = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..200)
            .map(|_| (0..3).map(|_| r.gen_range(-1.0..1.0)).collect())
            .collect()
    };
    let (a, b) = (cloud(&mut r), cloud(&mut r));
    let mut group = c.benchmark_group("hausdorff-sampled");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |bch| {
            bch.iter(|| {
                hausdorff_distance_with(black_box(&a), &b, 4096, DEFAULT_SEED, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, penalty_kernels, hausdorff_kernel);
criterion_main!(benches);
