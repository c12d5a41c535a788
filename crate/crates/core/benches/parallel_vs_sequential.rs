use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use elliptope::experiments::{run, ExperimentConfig, ExperimentKind};
use elliptope::graph::{gen_er, CenteredOperator};
use elliptope::matrix::{deformed_goe, eig_sym};
use elliptope::par::Parallelism;
use elliptope::solver::{opt_k, SolverParams};
use elliptope::witness::{grid_search_from_spectrum, WitnessGrid, WitnessKind};
use std::hint::black_box;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn restarts(c: &mut Criterion) {
    let g = gen_er(2000, 10.0, 1).unwrap();
    let op = CenteredOperator::normalized(&g, 10.0).unwrap();
    let mut group = c.benchmark_group("opt_k_restarts");
    group.sample_size(10);
    for (name, mode) in MODES {
        let params = SolverParams {
            restarts: 4,
            parallelism: mode,
            ..SolverParams::default()
        };
        group.bench_function(BenchmarkId::new(name, "er_n2000_k16"), |b| {
            b.iter(|| opt_k(&op, 16, &params, black_box(7)).unwrap().value)
        });
    }
    group.finish();
}

fn trials(c: &mut Criterion) {
    let mut config = ExperimentConfig::new(ExperimentKind::Detect2);
    config.model.n = Some(500);
    config.trials = 8;
    config.solver.restarts = 1;
    config.record_wallclock = false;
    let mut group = c.benchmark_group("experiment_trials");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "detect2_n500_x8"), |b| {
            b.iter(|| run(black_box(&config), mode).unwrap().records.len())
        });
    }
    group.finish();
}

fn witness_grid(c: &mut Criterion) {
    let b = deformed_goe(400, 2.0, 3);
    let spec = eig_sym(&b).unwrap();
    let grid = WitnessGrid::default();
    let mut group = c.benchmark_group("witness_grid");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "goe_n400"), |bench| {
            bench.iter(|| {
                grid_search_from_spectrum(&b, &spec, WitnessKind::Supercritical, &grid, mode)
                    .unwrap()
                    .value
            })
        });
    }
    group.finish();
}

criterion_group!(benches, restarts, trials, witness_grid);
criterion_main!(benches);
