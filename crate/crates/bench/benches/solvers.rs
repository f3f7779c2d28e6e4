use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hpla_core::fem::{build_hierarchy, Boundary, PoissonProblem};
use hpla_core::solvers::{v_cycle, CoarseParams, SmootherParams};
use hpla_core::swe::{make_scenario, timestep, PrecisionConfig, ScenarioKind, SweParams};
use hpla_core::{Backend, DenseVector};

fn multigrid_cycle(c: &mut Criterion) {
    let be = Backend::generic();
    let mut group = c.benchmark_group("v_cycle");
    group.sample_size(20);
    for level in [6, 8] {
        let h = build_hierarchy::<f64>(level, &Boundary::dirichlet(), SmootherParams::default(), CoarseParams::default())
            .unwrap();
        let b = PoissonProblem::polynomial(level).rhs().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(level), &level, |bench, _| {
            bench.iter(|| {
                let mut x = DenseVector::zeros(b.len()).unwrap();
                v_cycle(&be, &h, h.finest(), &mut x, &b).unwrap();
                x
            });
        });
    }
    group.finish();
}

fn swe_step(c: &mut Criterion) {
    let be = Backend::generic();
    let params = SweParams::default();
    let mut group = c.benchmark_group("swe_timestep");
    group.sample_size(20);
    let state = make_scenario(ScenarioKind::CircularDambreak, 100, &params).unwrap();
    let single = state.convert::<f32>(&be);
    group.bench_function("double", |b| {
        b.iter(|| timestep(&be, &state, &params, PrecisionConfig::AllDouble, 1).unwrap());
    });
    group.bench_function("single", |b| {
        b.iter(|| timestep(&be, &single, &params, PrecisionConfig::AllSingle, 1).unwrap());
    });
    group.bench_function("prediction-double", |b| {
        b.iter(|| timestep(&be, &single, &params, PrecisionConfig::PredictionDouble, 1).unwrap());
    });
    group.finish();
}

criterion_group!(benches, multigrid_cycle, swe_step);
criterion_main!(benches);
