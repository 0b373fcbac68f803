use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use uavplace_bench::{objective, scenario};
use uavplace_core::harness::solve;
use uavplace_core::{link_geometry, Building, Distribution, Point3, SolverKind, ThetaConvention};

fn links(c: &mut Criterion) {
    let b = Building::with_default_floors(20.0, 50.0, 200.0).unwrap();
    let uav = Point3::new(-24.8, 25.0, 100.0);
    let user = Point3::new(17.5, 45.0, 197.5);
    let mut group = c.benchmark_group("link_geometry");
    for conv in [ThetaConvention::Elevation, ThetaConvention::Incidence] {
        group.bench_function(format!("{conv:?}"), |bench| {
            bench.iter(|| link_geometry(black_box(&uav), black_box(&user), &b, conv).unwrap())
        });
    }
    group.finish();
}

fn objective_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("objective_cost");
    for z_b in [200.0, 250.0, 300.0] {
        let obj = objective(z_b, Distribution::SymmetricGrid);
        let uav = Point3::new(-30.0, 25.0, z_b / 2.0);
        group.bench_with_input(BenchmarkId::from_parameter(z_b), &uav, |bench, uav| {
            bench.iter(|| obj.cost(black_box(uav)))
        });
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_200m");
    group.sample_size(10);
    for solver in [SolverKind::Pso, SolverKind::Gd] {
        let mut s = scenario(200.0, Distribution::UniformPerFloor);
        s.solver = solver;
        let obj = s.objective().unwrap();
        group.bench_function(solver.name(), |bench| bench.iter(|| solve(&s, &obj).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, links, objective_eval, solvers);
criterion_main!(benches);
