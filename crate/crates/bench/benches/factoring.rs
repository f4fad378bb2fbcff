//! Microbenchmarks for the factoring kernels and their supporting
//! primitives: the hard-case vectors, per-method dataset throughput, the
//! perfect-square filter, and dataset generation.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use rmfactor::arith::{is_perfect_square, isqrt_floor, Natural};
use rmfactor::dataset::{generate_dataset, GeneratorSpec};
use rmfactor::factor::factor_with;
use rmfactor::{Method, MethodConfig};

fn hard_cases(c: &mut Criterion) {
    let n = Natural::from(99_968_287_751_261u64);
    let mut group = c.benchmark_group("hard_case_14_digits");
    group.sample_size(10);
    for (name, cfg) in [
        ("rm_120", MethodConfig::new(Method::Rm, 120)),
        ("rm_5040", MethodConfig::new(Method::Rm, 5040)),
        ("sm_480", MethodConfig::new(Method::Sm, 480)),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| factor_with(black_box(&n), &cfg).unwrap())
        });
    }
    group.finish();
}

fn dataset_throughput(c: &mut Criterion) {
    let spec = GeneratorSpec {
        digits: 10,
        count: 200,
        seed: 7,
    };
    let data = generate_dataset(&spec).unwrap();
    let mut group = c.benchmark_group("factor_200_r10_records");
    group.sample_size(10);
    for (name, cfg) in [
        ("lehman", MethodConfig::new(Method::Lehman, 1)),
        ("sm_480", MethodConfig::new(Method::Sm, 480)),
        ("rm_120", MethodConfig::new(Method::Rm, 120)),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| {
                for rec in &data {
                    black_box(factor_with(&rec.n, &cfg).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn square_filter(c: &mut Criterion) {
    // radicand-shaped inputs: mostly non-squares, which the residue filter
    // should reject without a root extraction
    let samples: Vec<Natural> = (0..1_000u64)
        .map(|i| Natural::from(480u64) * Natural::from(9_876_543_210u64 + i))
        .collect();
    c.bench_function("is_perfect_square_1000_radicands", |b| {
        b.iter(|| {
            for s in &samples {
                black_box(is_perfect_square(black_box(s)));
            }
        })
    });
    c.bench_function("isqrt_floor_1000_radicands", |b| {
        b.iter(|| {
            for s in &samples {
                black_box(isqrt_floor(black_box(s)));
            }
        })
    });
}

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_dataset");
    group.sample_size(10);
    group.bench_function("r12_x100", |b| {
        b.iter_batched(
            || GeneratorSpec {
                digits: 12,
                count: 100,
                seed: 1,
            },
            |spec| generate_dataset(&spec).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(
    benches,
    hard_cases,
    dataset_throughput,
    square_filter,
    generation
);
criterion_main!(benches);
