//! Benchmarks for the data-parallel hot paths, comparing a single-thread
//! pool against the default pool. Build without the `parallel` feature to
//! measure the plain sequential fallback.

use criterion::{criterion_group, criterion_main, Criterion};

use radform_core::frontend::{parse_equation, SymbolTable};
use radform_core::oracle::{numeric_chain_check, OracleConfig};
use radform_core::par::with_threads;
use radform_core::testkit;
use radform_core::transform::{run_pipeline, PipelineOptions, TransformOutcome};

fn intro_outcome() -> TransformOutcome {
    let symbols = SymbolTable {
        vars: vec!["x".into()],
        unknowns: vec!["y".into()],
        params: vec![],
    };
    let e = parse_equation(
        "((14*x+12)*sqrt(x) + (13*x+4)*sqrt(x+1))*y + 4*(x^2+x)*(y')^2",
        &symbols,
    )
    .unwrap();
    let opts = PipelineOptions {
        run_oracle: false,
        ..PipelineOptions::default()
    };
    run_pipeline(&[e], &symbols, &opts).unwrap()
}

fn bench_chain_oracle(c: &mut Criterion) {
    let out = intro_outcome();
    let q = out.parametrization.clone().unwrap();
    let cfg = OracleConfig {
        samples: 16,
        seed: 9,
        ..OracleConfig::default()
    };
    let mut group = c.benchmark_group("chain_oracle_16_samples");
    group.sample_size(10);
    group.bench_function("one_thread", |b| {
        b.iter(|| {
            with_threads(1, || {
                numeric_chain_check(
                    &out.original[0],
                    &out.pre_normal[0],
                    &out.tower,
                    &q,
                    &out.x_vars,
                    &cfg,
                )
                .unwrap()
            })
        })
    });
    group.bench_function("default_pool", |b| {
        b.iter(|| {
            numeric_chain_check(
                &out.original[0],
                &out.pre_normal[0],
                &out.tower,
                &q,
                &out.x_vars,
                &cfg,
            )
            .unwrap()
        })
    });
    group.finish();
}

fn bench_kernel_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("gcd_suite_120_instances");
    group.sample_size(10);
    group.bench_function("one_thread", |b| {
        b.iter(|| with_threads(1, || testkit::gcd_divisibility_suite(120, 5).unwrap()))
    });
    group.bench_function("default_pool", |b| {
        b.iter(|| testkit::gcd_divisibility_suite(120, 5).unwrap())
    });
    group.finish();
}

fn bench_end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline_intro_equation");
    group.sample_size(10);
    group.bench_function("transform_no_oracle", |b| b.iter(intro_outcome));
    group.finish();
}

criterion_group!(benches, bench_chain_oracle, bench_kernel_suites, bench_end_to_end);
criterion_main!(benches);
