use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qetlab_bench::{flipflop, singlet_post_measurement};
use qetlab_core::circuit::{build_deferred_circuit, build_dynamic_circuit, sample_pauli};
use qetlab_core::protocol::{run_protocol, zeno_trace_distance};
use qetlab_core::qmat::eig_hermitian;
use qetlab_core::slp::{certify_slp, min_delta_e_oracle, PSD_TOL};
use qetlab_core::{DensityMatrix, ModelParams, OracleConfig, Outcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eigensolver(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("eig_hermitian");
    for dim in [2usize, 4, 8] {
        let h = qetlab_core::random::hermitian(&mut rng, dim, 1.0);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &h, |b, h| b.iter(|| eig_hermitian(black_box(h))));
    }
    group.finish();
}

fn certification(c: &mut Criterion) {
    let h = flipflop();
    let rho = singlet_post_measurement();
    c.bench_function("certify_slp", |b| b.iter(|| certify_slp(black_box(&rho), &h, PSD_TOL)));

    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for starts in [1usize, 8] {
        let config = OracleConfig::new(starts, 0);
        group.bench_with_input(BenchmarkId::new("starts", starts), &config, |b, config| {
            b.iter(|| min_delta_e_oracle(black_box(&rho), &h, config))
        });
    }
    group.finish();
}

fn protocol(c: &mut Criterion) {
    let params = ModelParams::flipflop(1.0, 1.5).unwrap();
    c.bench_function("run_protocol", |b| b.iter(|| run_protocol(black_box(&params))));
    let h = flipflop();
    c.bench_function("zeno_1000_steps", |b| b.iter(|| zeno_trace_distance(&h, Outcome::Plus, 1.0, black_box(1000))));
}

fn circuits(c: &mut Criterion) {
    let zero = DensityMatrix::basis("00").unwrap();
    let dynamic = build_dynamic_circuit(1.0, 1.5).unwrap();
    let deferred = build_deferred_circuit(1.0, 1.5).unwrap();
    c.bench_function("simulate_dynamic", |b| b.iter(|| dynamic.simulate(black_box(&zero))));
    c.bench_function("simulate_deferred", |b| b.iter(|| deferred.simulate(black_box(&zero))));
    let after = dynamic.simulate(&zero).unwrap().final_state;
    c.bench_function("sample_pauli_20000", |b| b.iter(|| sample_pauli(black_box(&after), "XX", 20_000, 42)));
}

criterion_group!(benches, eigensolver, certification, protocol, circuits);
criterion_main!(benches);
