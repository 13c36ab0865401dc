use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use satbandit::belief::{BeliefState, Prior};
use satbandit::env::{BanditInstance, ObjectiveSpec};
use satbandit::linalg::SymMatrix;
use satbandit::policy::{select, PolicySpec};
use satbandit::sim::{run_monte_carlo_serial, run_trial, SimulationConfig};
use satbandit::stats::{std_normal_cdf, std_normal_quantile, Probability};

fn fig_instance() -> BanditInstance {
    BanditInstance::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0; 4]).unwrap()
}

fn bench_stats(c: &mut Criterion) {
    c.bench_function("std_normal_cdf", |b| {
        b.iter(|| std_normal_cdf(black_box(0.731)).unwrap().value())
    });
    c.bench_function("std_normal_quantile", |b| {
        let p = Probability::new(0.995).unwrap();
        b.iter(|| std_normal_quantile(black_box(p)))
    });
}

fn bench_belief_update(c: &mut Criterion) {
    c.bench_function("belief_update_flat_prior_4_arms", |b| {
        let prior = Prior::uninformative(4);
        b.iter_batched(
            || BeliefState::init(&prior, &[1.0; 4]).unwrap(),
            |mut state| {
                for i in 0..64u64 {
                    state.update((i % 4) as usize, 0.7, 1.0).unwrap();
                }
                state
            },
            BatchSize::SmallInput,
        )
    });
    c.bench_function("belief_update_correlated_prior_4_arms", |b| {
        let cov = SymMatrix::from_rows(&[
            vec![2.0, 0.5, 0.2, 0.1],
            vec![0.5, 2.0, 0.5, 0.2],
            vec![0.2, 0.5, 2.0, 0.5],
            vec![0.1, 0.2, 0.5, 2.0],
        ])
        .unwrap();
        let prior = Prior::informative(vec![0.0; 4], cov).unwrap();
        b.iter_batched(
            || BeliefState::init(&prior, &[1.0; 4]).unwrap(),
            |mut state| {
                for i in 0..64u64 {
                    state.update((i % 4) as usize, 0.7, 1.0).unwrap();
                }
                state
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_selection(c: &mut Criterion) {
    let spec = PolicySpec::default_for(ObjectiveSpec::standard(), 4);
    let mut state = BeliefState::init(&spec.prior, &[1.0; 4]).unwrap();
    for i in 0..40u64 {
        state.update((i % 4) as usize, (i % 7) as f64 * 0.3, 1.0).unwrap();
    }
    c.bench_function("select_ucl_4_arms", |b| {
        b.iter(|| select(black_box(&state), black_box(500), &spec).unwrap().arm)
    });
}

fn bench_trials(c: &mut Criterion) {
    let config = SimulationConfig {
        instance: fig_instance(),
        policy: PolicySpec::default_for(ObjectiveSpec::standard(), 4),
        horizon: 1000,
        trials: 1,
        master_seed: 42,
    };
    c.bench_function("run_trial_standard_T1000", |b| {
        b.iter(|| run_trial(black_box(&config), 0).unwrap().records.len())
    });
    let mc = SimulationConfig {
        trials: 10,
        ..config.clone()
    };
    c.bench_function("monte_carlo_10_trials_T1000", |b| {
        b.iter(|| run_monte_carlo_serial(black_box(&mc)).unwrap().horizon)
    });
}

criterion_group!(
    benches,
    bench_stats,
    bench_belief_update,
    bench_selection,
    bench_trials
);
criterion_main!(benches);
