use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qudit_magic::exec::Exec;
use qudit_magic::gkpsim::{logical_clifford_word, simulate_homodyne_batch};
use qudit_magic::measures::batch_negativity;
use qudit_magic::pauli::{CliffordKind, CliffordOp};
use qudit_magic::qpsim::{run_trajectories, Circuit, Gate, MeasurementEffect, Variant};
use qudit_magic::random::{random_mixed_state, stream_rng};
use qudit_magic::{DensityState, QuditSystem};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn qp_sim(c: &mut Criterion) {
    let s = QuditSystem::new(3, 2).unwrap();
    let rho = random_mixed_state(s, &mut stream_rng(1, 0));
    let circ = Circuit::new(
        rho,
        vec![
            Gate::clifford(CliffordKind::Fourier, vec![0]),
            Gate::t(0),
            Gate::clifford(CliffordKind::Sum, vec![0, 1]),
            Gate::t(1),
            Gate::clifford(CliffordKind::Phase, vec![1]),
        ],
        MeasurementEffect::Computational { qudits: vec![0, 1], outcome: vec![0, 2] },
    )
    .unwrap();
    let mut g = c.benchmark_group("qp_sim_200k");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_trajectories(&circ, Variant::Basis, 200_000, 7, 16, exec).unwrap())
        });
    }
    g.finish();
}

fn gkp_sim(c: &mut Criterion) {
    let s = QuditSystem::new(3, 2).unwrap();
    let rho = random_mixed_state(s, &mut stream_rng(2, 0));
    let word = [CliffordOp::new(CliffordKind::Fourier, vec![0]), CliffordOp::new(CliffordKind::Sum, vec![0, 1])];
    let circuit = logical_clifford_word(s, &word).unwrap();
    let mut g = c.benchmark_group("gkp_sim_100k");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| simulate_homodyne_batch(&rho, &circuit, 100_000, 7, 16, exec).unwrap())
        });
    }
    g.finish();
}

fn negativity(c: &mut Criterion) {
    let s = QuditSystem::new(5, 2).unwrap();
    let mut rng = stream_rng(3, 0);
    let states: Vec<DensityState> = (0..64).map(|_| random_mixed_state(s, &mut rng)).collect();
    let mut g = c.benchmark_group("batch_negativity_64");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| b.iter(|| batch_negativity(&states, exec)));
    }
    g.finish();
}

criterion_group!(benches, qp_sim, gkp_sim, negativity);
criterion_main!(benches);
