use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heleshaw::closed_form::solve_example2;
use heleshaw::geometry::{critical_parameter, sample_boundary};
use heleshaw::moments::area_integral_grid;
use heleshaw::Execution;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn area_grid(c: &mut Criterion) {
    let eq = solve_example2(1.0, 1.0, 4.0).unwrap();
    let boundary = sample_boundary(&eq.map, 2048).unwrap();
    let mut group = c.benchmark_group("area_integral_grid");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| area_integral_grid(&boundary, |z| z * z, 400, exec))
        });
    }
    group.finish();
}

fn critical_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("critical_parameter");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                critical_parameter(|a| solve_example2(1.0, 1.0, a).map(|e| e.map), 1.0, 4.0, 1024, 1e-4, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, area_grid, critical_size);
criterion_main!(benches);
