use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nevlab::cli::{parse_problem, ProblemSpec};
use nevlab::exec::Execution;
use nevlab::filtration::FiltrationTable;
use nevlab::gradedgeom::{admissibility_check, AdmissibilityOptions, HomogeneousIdeal};
use nevlab::nevanlinna::{linear_grid, smt_margin, EntireCurve, SweepConfig};

fn problem(name: &str) -> ProblemSpec {
    let path = format!("{}/../../problems/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_problem(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn filtration(c: &mut Criterion) {
    let spec = problem("conic_moving.txt");
    let ideal = HomogeneousIdeal::new(spec.m, spec.variety.clone()).unwrap();
    let q = vec![spec.targets()[0].clone()];
    let mut g = c.benchmark_group("filtration_qz_N8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| FiltrationTable::build(&ideal, &q, 8, exec).unwrap())
        });
    }
    g.finish();
}

fn admissibility(c: &mut Criterion) {
    let spec = problem("conic_moving.txt");
    let ideal = HomogeneousIdeal::new(spec.m, spec.variety.clone()).unwrap();
    let targets = spec.targets();
    let mut g = c.benchmark_group("admissibility_conic");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = AdmissibilityOptions { seed: 7, exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| admissibility_check(&ideal, &targets, 1, &opts).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let spec = problem("conic_moving.txt");
    let ideal = HomogeneousIdeal::new(spec.m, spec.variety.clone()).unwrap();
    let targets = spec.targets();
    let curve = EntireCurve::new(spec.curve.clone()).unwrap();
    let mut g = c.benchmark_group("smt_sweep_conic");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SweepConfig { radii: linear_grid(5.0, 30.0, 26), exec, ..SweepConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| smt_margin(Some(&ideal), &targets, 1, &curve, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, filtration, admissibility, sweep);
criterion_main!(benches);
