//! Sequential against rayon-parallel execution of the grid workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use trcov::coverage::{set_relation_report, GridSpec, Scenario};
use trcov::times::{max_dwell_with, max_libration_with, OptimizerOptions};
use trcov::trajectory::sample_trajectory;
use trcov::wavefield::{canonical_basis, WellEigenstate};
use trcov::{Exec, Kinematics, Microstate, Parity, Potential, Region, Units};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn canonical() -> Kinematics {
    Kinematics::new(0.18, 0.5, Units::default()).unwrap()
}

fn optimizer(c: &mut Criterion) {
    let kin = canonical();
    let mut group = c.benchmark_group("optimizer");
    for (name, exec) in MODES {
        let opts = OptimizerOptions {
            exec,
            ..OptimizerOptions::default()
        };
        group.bench_with_input(BenchmarkId::new("max_dwell", name), &opts, |b, o| {
            b.iter(|| max_dwell_with(black_box(&kin), 1e-6, o).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("max_libration", name), &opts, |b, o| {
            b.iter(|| max_libration_with(black_box(&kin), 1.0, 1e-6, o).unwrap())
        });
    }
    group.finish();
}

fn trajectory(c: &mut Criterion) {
    let kin = canonical();
    let ms = Microstate::from_a_c(2.0, 1.5).unwrap().coefficients();
    let basis = canonical_basis(Region::Forbidden, &kin);
    let mut group = c.benchmark_group("sample_trajectory");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                sample_trajectory(0.0, 10.0, 256, &ms, &basis, black_box(&kin), exec).unwrap()
            })
        });
    }
    group.finish();
}

fn coverage(c: &mut Criterion) {
    let well = Potential::square_well(1.0, 2.0).unwrap();
    let state = WellEigenstate::new(well, Units::default(), Parity::Odd, 0).unwrap();
    let scenario = Scenario::SquareWellExcited(state);
    let grid = GridSpec::uniform((-1.8, 1.8, 9), (-1.9, 1.9, 77), (0.5, 40.0, 16));
    let mut group = c.benchmark_group("coverage_report");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| set_relation_report(black_box(&scenario), &grid, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, optimizer, trajectory, coverage);
criterion_main!(benches);
