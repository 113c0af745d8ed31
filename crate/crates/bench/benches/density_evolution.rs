use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use smp_core::de::{stepper_for, vn_step_exact};
use smp_core::{de_run, find_threshold, DeMode, DeSettings, Ensemble, ThresholdSettings};

fn vn_steps(c: &mut Criterion) {
    let ens = Ensemble::new(4, 8, 256).unwrap();
    let bounded = stepper_for(ens, DeMode::Bounded).unwrap();
    c.bench_function("vn_step_bounded_dv4_q256", |b| {
        b.iter(|| bounded.bounded_p0(black_box(0.05), black_box(0.18)))
    });
    c.bench_function("vn_step_exact_dv3_q16_uncached", |b| {
        b.iter(|| vn_step_exact(black_box(0.05), black_box(0.13), 3, 16).unwrap())
    });
}

fn trajectories(c: &mut Criterion) {
    let ens = Ensemble::new(3, 6, 64).unwrap();
    c.bench_function("de_run_bounded_3_6_q64", |b| {
        b.iter(|| de_run(ens, black_box(0.105), DeMode::Bounded, DeSettings::default()).unwrap())
    });
    c.bench_function("threshold_bounded_5_10_q512", |b| {
        let ens = Ensemble::new(5, 10, 512).unwrap();
        b.iter(|| find_threshold(ens, DeMode::Bounded, ThresholdSettings::default()).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = vn_steps, trajectories
}
criterion_main!(benches);
