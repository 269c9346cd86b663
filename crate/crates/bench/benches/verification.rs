use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use d42sym::holomorphy::ansatz_solve;
use d42sym::numerics::{integrate, CompiledField, IntegratorConfig, NumericState};
use d42sym::sampling::ExactSampler;
use d42sym::weyl::{generator, is_backlund_symmetry};
use d42sym::HamiltonianSystem;

fn exact_checks(c: &mut Criterion) {
    let sys = HamiltonianSystem::d42();
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    group.bench_function("backlund_s2", |b| {
        b.iter(|| is_backlund_symmetry(black_box(&generator(2)), &sys))
    });
    let mut sampler = ExactSampler::new(7);
    let params = sampler.generic_parameters();
    let t0 = sampler.time();
    group.bench_function("ansatz_solve", |b| {
        b.iter(|| ansatz_solve(black_box(&t0), &params).unwrap())
    });
    group.finish();
}

fn numeric(c: &mut Criterion) {
    let params = ExactSampler::new(7).small_parameters();
    let field = CompiledField::new(&HamiltonianSystem::d42(), &params).unwrap();
    let start = NumericState {
        t: 1.0,
        u: [0.1, -0.2, 0.3, 0.4, -0.1, 0.2],
    };
    c.bench_function("dopri5_unit_span", |b| {
        b.iter(|| integrate(&field, black_box(start), 1.3, &IntegratorConfig::default()).unwrap())
    });
}

criterion_group!(benches, exact_checks, numeric);
criterion_main!(benches);
