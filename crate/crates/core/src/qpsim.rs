//! Quasiprobability Monte Carlo estimation of Born probabilities, in the O_{l,m} frame and in
//! the Heisenberg-Weyl (characteristic function) frame.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{coords_to_index, coordinate_action_on, index_to_coords, o_factor, o_monomial, reduce_point, Domain, SymplecticAffineMap};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, pairwise_sum, split_counts, Exec, KahanSum};
use crate::measures::{characteristic_fn, x_distribution};
use crate::operator::{CMatrix, DenseOperator, DensityState, VALIDATION_TOL};
use crate::pauli::{check_targets, clifford_matrix, embed, hw_factor, hw_monomial, t_gate, CliffordKind};
use crate::random::stream_rng;
use crate::system::QuditSystem;

/// Coefficients below this magnitude are exact zeros for sampling.
pub const SAMPLING_CUTOFF: f64 = 1e-14;
pub const DEFAULT_STREAMS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Clifford(CliffordKind),
    /// diag(1, e^{iπ/4}, 1, …)
    T,
    /// Explicit unitary on the targets.
    Unitary(CMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn clifford(kind: CliffordKind, targets: Vec<usize>) -> Self {
        Self { kind: GateKind::Clifford(kind), targets }
    }

    pub fn t(target: usize) -> Self {
        Self { kind: GateKind::T, targets: vec![target] }
    }

    pub fn unitary(matrix: CMatrix, targets: Vec<usize>) -> Self {
        Self { kind: GateKind::Unitary(matrix), targets }
    }

    pub fn local_matrix(&self, d: usize) -> CMatrix {
        match &self.kind {
            GateKind::Clifford(k) => clifford_matrix(d, *k),
            GateKind::T => t_gate(d),
            GateKind::Unitary(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementEffect {
    /// 1 on the unmeasured qudits ⊗ |outcome⟩⟨outcome| on `qudits`.
    Computational { qudits: Vec<usize>, outcome: Vec<usize> },
    Explicit(CMatrix),
}

impl MeasurementEffect {
    pub fn dense(&self, system: QuditSystem) -> Result<CMatrix> {
        match self {
            MeasurementEffect::Explicit(m) => Ok(m.clone()),
            MeasurementEffect::Computational { qudits, outcome } => {
                let d = system.d();
                let dim = system.dim();
                let mut m = CMatrix::zeros(dim, dim);
                'rows: for r in 0..dim {
                    for (&q, &i) in qudits.iter().zip(outcome) {
                        if (r / d.pow((system.n() - 1 - q) as u32)) % d != i {
                            continue 'rows;
                        }
                    }
                    m[(r, r)] = Complex64::new(1.0, 0.0);
                }
                Ok(m)
            }
        }
    }
}

/// Input state, gate list and final effect.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub system: QuditSystem,
    pub input: DensityState,
    pub gates: Vec<Gate>,
    pub measurement: MeasurementEffect,
}

impl Circuit {
    pub fn new(input: DensityState, gates: Vec<Gate>, measurement: MeasurementEffect) -> Result<Self> {
        let system = input.system();
        let (d, n) = (system.d(), system.n());
        for g in &gates {
            check_targets(n, &g.targets)?;
            let m = g.local_matrix(d);
            let dk = d.pow(g.targets.len() as u32);
            if m.nrows() != dk || m.ncols() != dk {
                return Err(Error::ShapeMismatch(format!("gate of size {} on {} target(s)", m.nrows(), g.targets.len())));
            }
            if let GateKind::Clifford(k) = g.kind {
                if k.arity() != g.targets.len() {
                    return Err(Error::ShapeMismatch(format!("{k:?} needs {} target(s)", k.arity())));
                }
            }
            let dev = crate::operator::max_abs_diff(&(&m * m.adjoint()), &CMatrix::identity(dk, dk));
            if dev > VALIDATION_TOL {
                return Err(Error::NotUnitary(dev));
            }
        }
        match &measurement {
            MeasurementEffect::Computational { qudits, outcome } => {
                check_targets(n, qudits)?;
                if qudits.len() != outcome.len() || outcome.iter().any(|&i| i >= d) {
                    return Err(Error::InvalidArgument("measurement outcome must give one digit < d per qudit".into()));
                }
            }
            MeasurementEffect::Explicit(m) => {
                let op = DenseOperator::new(system, m.clone())?;
                if op.hermiticity_deviation() > VALIDATION_TOL {
                    return Err(Error::InvalidArgument("measurement effect is not Hermitian".into()));
                }
                let sym = (m + m.adjoint()).scale(0.5);
                let eig = sym.symmetric_eigenvalues();
                if eig.iter().any(|&e| !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&e)) {
                    return Err(Error::InvalidArgument("measurement effect eigenvalues must lie in [0, 1]".into()));
                }
            }
        }
        Ok(Self { system, input, gates, measurement })
    }

    /// Full unitary of the gate sequence.
    pub fn unitary(&self) -> Result<CMatrix> {
        let dim = self.system.dim();
        let mut u = CMatrix::identity(dim, dim);
        for g in &self.gates {
            u = embed(self.system, &g.local_matrix(self.system.d()), &g.targets)? * u;
        }
        Ok(u)
    }

    /// Tr[Π U ρ U†] by dense evolution.
    pub fn exact_born(&self) -> Result<f64> {
        let u = DenseOperator::new(self.system, self.unitary()?)?;
        Ok(self.input.evolve(&u)?.expectation(&self.measurement.dense(self.system)?))
    }
}

/// Number of samples for precision ε with failure probability p_f at aggregated norm M:
/// ⌈2 M² ln(2/p_f) / ε²⌉.
pub fn sample_count(forward_norm: f64, epsilon: f64, p_fail: f64) -> Result<u64> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if p_fail.is_nan() || p_fail <= 0.0 || p_fail >= 1.0 {
        return Err(Error::InvalidArgument(format!("failure probability must lie in (0, 1), got {p_fail}")));
    }
    if !forward_norm.is_finite() || forward_norm < 0.0 {
        return Err(Error::InvalidArgument(format!("forward norm must be finite, got {forward_norm}")));
    }
    let k = 2.0 * forward_norm * forward_norm * (2.0 / p_fail).ln() / (epsilon * epsilon);
    let r = k.round();
    // absorb roundoff in cases like ln(2/p_f) = 2 exactly
    let k = if (k - r).abs() <= 1e-9 * r.max(1.0) { r } else { k.ceil() };
    if k > u64::MAX as f64 {
        return Err(Error::InvalidArgument("sample count overflows".into()));
    }
    Ok(k.max(1.0) as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub epsilon: f64,
    pub failure_prob: f64,
    pub samples_used: u64,
    pub forward_norm: f64,
    /// False when a gate maximum came from a sampled sweep rather than an exhaustive one.
    pub forward_norm_exact: bool,
    pub seed: u64,
    pub streams: usize,
}

/// Scalar type of a frame: real for O_{l,m}, complex for Heisenberg-Weyl operators.
pub(crate) trait FrameValue: Copy + Send + Sync + std::ops::Mul<Output = Self> {
    fn one() -> Self;
    fn mag(&self) -> f64;
    fn unit(&self) -> Self;
    fn scale(&self, s: f64) -> Self;
    fn real(&self) -> f64;
}

impl FrameValue for f64 {
    fn one() -> Self {
        1.0
    }
    fn mag(&self) -> f64 {
        self.abs()
    }
    fn unit(&self) -> Self {
        self.signum()
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn real(&self) -> f64 {
        *self
    }
}

impl FrameValue for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn mag(&self) -> f64 {
        self.norm()
    }
    fn unit(&self) -> Self {
        self / self.norm()
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn real(&self) -> f64 {
        self.re
    }
}

/// Nonzero entries of a discrete distribution with an inverse-CDF sampler.
#[derive(Debug, Clone)]
pub(crate) struct Table<V> {
    pub(crate) entries: Vec<(usize, V)>,
    cdf: Vec<f64>,
    pub(crate) norm: f64,
}

impl<V: FrameValue> Table<V> {
    pub(crate) fn new(values: impl IntoIterator<Item = (usize, V)>) -> Self {
        let mut entries = Vec::new();
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        for (i, v) in values {
            if v.mag() < SAMPLING_CUTOFF {
                continue;
            }
            acc += v.mag();
            entries.push((i, v));
            cdf.push(acc);
        }
        Self { entries, cdf, norm: acc }
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> (usize, V) {
        let u = rng.random::<f64>() * self.norm;
        let pos = self.cdf.partition_point(|&c| c <= u).min(self.entries.len() - 1);
        self.entries[pos]
    }
}

enum GateOp {
    Map(SymplecticAffineMap),
    Dense(CMatrix),
}

struct FrameGate {
    targets: Vec<usize>,
    op: GateOp,
}

enum MeasureTable<V> {
    PerQudit(Vec<Vec<V>>),
    Global(Vec<V>),
}

/// Everything a trajectory reads; shared read-only across streams.
struct Engine<V> {
    system: QuditSystem,
    init: Table<V>,
    gates: Vec<FrameGate>,
    measure: MeasureTable<V>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FrameBasis {
    O,
    Pauli,
}

fn local_coords(coords: &[i64], n: usize, targets: &[usize]) -> Vec<i64> {
    targets.iter().map(|&q| coords[q]).chain(targets.iter().map(|&q| coords[n + q])).collect()
}

fn write_local(coords: &mut [i64], n: usize, targets: &[usize], local: &[i64]) {
    let k = targets.len();
    for (j, &q) in targets.iter().enumerate() {
        coords[q] = local[j];
        coords[n + q] = local[k + j];
    }
}

trait FrameOps: FrameValue {
    fn dense_column(system: QuditSystem, u: &CMatrix, local: &[i64]) -> Vec<(usize, Self)>;
    fn map_column(d: usize, map: &SymplecticAffineMap, local: &[i64]) -> Vec<(usize, Self)>;
}

impl FrameOps for f64 {
    /// x_U(λ′, λ) = d^{−k} Tr[O_λ′ U O_λ U†]
    fn dense_column(system: QuditSystem, u: &CMatrix, local: &[i64]) -> Vec<(usize, Self)> {
        let d = system.d();
        let conj = o_monomial(system, local).conjugated_by(u);
        let norm = system.dim() as f64;
        (0..Domain::Restricted.size(system))
            .map(|j| (j, o_monomial(system, &index_to_coords(j, system.n(), d)).trace_with(&conj).re / norm))
            .collect()
    }

    fn map_column(d: usize, map: &SymplecticAffineMap, local: &[i64]) -> Vec<(usize, Self)> {
        let (r, s) = reduce_point(d, &map.apply(local));
        vec![(coords_to_index(&r, d), s as f64)]
    }
}

impl FrameOps for Complex64 {
    /// χ_U(u′, u) = d^{−k} Tr[P(u′)† U P(u) U†]
    fn dense_column(system: QuditSystem, u: &CMatrix, local: &[i64]) -> Vec<(usize, Self)> {
        let d = system.d();
        let conj = hw_monomial(system, local).conjugated_by(u);
        let norm = system.dim() as f64;
        (0..Domain::Restricted.size(system))
            .map(|j| (j, hw_monomial(system, &index_to_coords(j, system.n(), d)).trace_with_adjoint(&conj) / norm))
            .collect()
    }

    fn map_column(_: usize, _: &SymplecticAffineMap, _: &[i64]) -> Vec<(usize, Self)> {
        unreachable!("the Heisenberg-Weyl frame uses dense columns")
    }
}

type ColumnCache<V> = Vec<HashMap<usize, Table<V>>>;

impl<V: FrameOps> Engine<V> {
    fn column(&self, gate: usize, local: &[i64]) -> Table<V> {
        let g = &self.gates[gate];
        let d = self.system.d();
        let sub = QuditSystem::new(d, g.targets.len()).expect("targets fit the register");
        match &g.op {
            GateOp::Map(m) => Table::new(V::map_column(d, m, local)),
            GateOp::Dense(u) => Table::new(V::dense_column(sub, u, local)),
        }
    }

    fn measure_value(&self, coords: &[i64]) -> V {
        let (d, n) = (self.system.d(), self.system.n());
        match &self.measure {
            MeasureTable::Global(v) => v[coords_to_index(coords, d)],
            MeasureTable::PerQudit(tables) => {
                let mut acc = V::one();
                for (q, t) in tables.iter().enumerate() {
                    acc = acc * t[coords_to_index(&[coords[q], coords[n + q]], d)];
                }
                acc
            }
        }
    }

    fn measure_max(&self) -> f64 {
        match &self.measure {
            MeasureTable::Global(v) => v.iter().map(|x| x.mag()).fold(0.0, f64::max),
            MeasureTable::PerQudit(t) => t.iter().map(|row| row.iter().map(|x| x.mag()).fold(0.0, f64::max)).product(),
        }
    }

    fn forward_norm(&self, seed: u64) -> (f64, bool) {
        let d = self.system.d();
        let mut total = self.init.norm * self.measure_max();
        let mut exact = true;
        for (gi, g) in self.gates.iter().enumerate() {
            if let GateOp::Map(_) = g.op {
                continue;
            }
            let size = d.pow(2 * g.targets.len() as u32);
            let k = g.targets.len();
            let best = if size <= 4096 {
                (0..size).map(|j| self.column(gi, &index_to_coords(j, k, d)).norm).fold(0.0, f64::max)
            } else {
                exact = false;
                let mut rng = stream_rng(seed, u64::MAX - gi as u64);
                (0..256).map(|_| self.column(gi, &index_to_coords(rng.random_range(0..size), k, d)).norm).fold(0.0, f64::max)
            };
            total *= best;
        }
        (total, exact)
    }

    /// One trajectory; returns the signed estimator value.
    fn trajectory<R: Rng>(&self, rng: &mut R, cache: &mut ColumnCache<V>) -> Result<f64> {
        let (d, n) = (self.system.d(), self.system.n());
        let (start, v0) = self.init.sample(rng);
        let mut acc = v0.unit().scale(self.init.norm);
        let mut coords = index_to_coords(start, n, d);
        for (gi, g) in self.gates.iter().enumerate() {
            let local = local_coords(&coords, n, &g.targets);
            let key = coords_to_index(&local, d);
            if !cache[gi].contains_key(&key) {
                let col = self.column(gi, &local);
                cache[gi].insert(key, col);
            }
            let col = &cache[gi][&key];
            if col.entries.is_empty() {
                return Err(Error::Internal(format!("gate {gi} has an all-zero frame column")));
            }
            let (next, v) = col.sample(rng);
            acc = acc * v.unit().scale(col.norm);
            write_local(&mut coords, n, &g.targets, &index_to_coords(next, g.targets.len(), d));
        }
        Ok((acc * self.measure_value(&coords)).real())
    }

    fn run(&self, samples: u64, seed: u64, streams: usize, exec: Exec) -> Result<RunStats> {
        let streams = streams.max(1);
        let per = split_counts(samples, streams);
        let results = map_indexed(exec, streams, |s| -> Result<(f64, f64)> {
            let mut rng = stream_rng(seed, s as u64);
            let mut cache: ColumnCache<V> = (0..self.gates.len()).map(|_| HashMap::new()).collect();
            let (mut sum, mut sq) = (KahanSum::default(), KahanSum::default());
            for _ in 0..per[s] {
                let x = self.trajectory(&mut rng, &mut cache)?;
                sum.add(x);
                sq.add(x * x);
            }
            Ok((sum.value(), sq.value()))
        });
        let results: Vec<(f64, f64)> = results.into_iter().collect::<Result<_>>()?;
        let sum = pairwise_sum(&results.iter().map(|r| r.0).collect::<Vec<_>>());
        let sq = pairwise_sum(&results.iter().map(|r| r.1).collect::<Vec<_>>());
        let k = samples.max(1) as f64;
        let mean = sum / k;
        let variance = if samples > 1 { (sq - k * mean * mean) / (k - 1.0) } else { 0.0 };
        Ok(RunStats { mean, variance: variance.max(0.0), samples, streams })
    }
}

fn build_gates(system: QuditSystem, gates: &[Gate], basis: FrameBasis) -> Result<Vec<FrameGate>> {
    let d = system.d();
    gates
        .iter()
        .map(|g| {
            let k = g.targets.len();
            let sub = QuditSystem::new(d, k)?;
            let op = match (&g.kind, basis) {
                (GateKind::Clifford(kind), FrameBasis::O) => {
                    let local: Vec<usize> = (0..k).collect();
                    GateOp::Map(coordinate_action_on(sub, *kind, &local)?)
                }
                _ => GateOp::Dense(g.local_matrix(d)),
            };
            Ok(FrameGate { targets: g.targets.clone(), op })
        })
        .collect()
}

fn o_engine(circuit: &Circuit) -> Result<Engine<f64>> {
    let system = circuit.system;
    let d = system.d();
    let x = x_distribution(&circuit.input, Domain::Restricted);
    let init = Table::new(x.values.iter().enumerate().map(|(i, v)| (i, v.re)));
    if init.norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let measure = match &circuit.measurement {
        MeasurementEffect::Computational { qudits, outcome } => MeasureTable::PerQudit(
            (0..system.n())
                .map(|q| {
                    let which = qudits.iter().position(|&m| m == q).map(|j| outcome[j]);
                    (0..d * d)
                        .map(|j| {
                            let o = o_factor(d, (j / d) as i64, (j % d) as i64);
                            match which {
                                Some(i) if o.cols[i] == i => o.vals[i].re,
                                Some(_) => 0.0,
                                None => o.trace().re,
                            }
                        })
                        .collect()
                })
                .collect(),
        ),
        MeasurementEffect::Explicit(m) => MeasureTable::Global(
            (0..Domain::Restricted.size(system))
                .map(|i| o_monomial(system, &index_to_coords(i, system.n(), d)).trace_with(m).re)
                .collect(),
        ),
    };
    Ok(Engine { system, init, gates: build_gates(system, &circuit.gates, FrameBasis::O)?, measure })
}

fn pauli_engine(circuit: &Circuit) -> Result<Engine<Complex64>> {
    let system = circuit.system;
    let (d, n) = (system.d(), system.n());
    let chi = characteristic_fn(&circuit.input, Domain::Restricted);
    // one representative per class {u, −u}; the pair shares |χ| and contributes 2·Re term
    let mut reps = Vec::new();
    for i in 0..chi.len() {
        let u = index_to_coords(i, n, d);
        let neg: Vec<i64> = u.iter().map(|&x| -x).collect();
        let j = coords_to_index(&neg, d);
        if j < i {
            continue;
        }
        let w = if j == i { 1.0 } else { 2.0 };
        reps.push((i, chi.values[i] * w));
    }
    let init = Table::new(reps);
    if init.norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let measure = match &circuit.measurement {
        MeasurementEffect::Computational { qudits, outcome } => MeasureTable::PerQudit(
            (0..n)
                .map(|q| {
                    let which = qudits.iter().position(|&m| m == q).map(|j| outcome[j]);
                    (0..d * d)
                        .map(|j| {
                            let p = hw_factor(d, (j / d) as i64, (j % d) as i64);
                            match which {
                                Some(i) if p.cols[i] == i => p.vals[i],
                                Some(_) => Complex64::new(0.0, 0.0),
                                None => p.trace(),
                            }
                        })
                        .collect()
                })
                .collect(),
        ),
        MeasurementEffect::Explicit(m) => MeasureTable::Global(
            (0..Domain::Restricted.size(system))
                .map(|i| hw_monomial(system, &index_to_coords(i, n, d)).trace_with(m))
                .collect(),
        ),
    };
    Ok(Engine { system, init, gates: build_gates(system, &circuit.gates, FrameBasis::Pauli)?, measure })
}

/// Sample mean and variance of a fixed number of trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub mean: f64,
    pub variance: f64,
    pub samples: u64,
    pub streams: usize,
}

/// Which frame the estimator expands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// O_{l,m} basis
    #[default]
    Basis,
    /// Heisenberg-Weyl operators with conjugate-pair sampling
    Characteristic,
}

/// ‖x_ρ‖₁ · Π_t max_λ ‖x_{U_t}(·, λ)‖₁ · max_λ |x_Π(λ)| and whether every maximum was exhaustive.
pub fn forward_norm(circuit: &Circuit) -> Result<(f64, bool)> {
    Ok(o_engine(circuit)?.forward_norm(0))
}

/// The same aggregate in the Heisenberg-Weyl frame.
pub fn forward_norm_char(circuit: &Circuit) -> Result<(f64, bool)> {
    Ok(pauli_engine(circuit)?.forward_norm(0))
}

/// Runs exactly `samples` trajectories.
pub fn run_trajectories(circuit: &Circuit, variant: Variant, samples: u64, seed: u64, streams: usize, exec: Exec) -> Result<RunStats> {
    match variant {
        Variant::Basis => o_engine(circuit)?.run(samples, seed, streams, exec),
        Variant::Characteristic => pauli_engine(circuit)?.run(samples, seed, streams, exec),
    }
}

/// Estimate of Tr[Π U ρ U†] within ε with probability at least 1 − p_f.
pub fn estimate_born(circuit: &Circuit, epsilon: f64, p_fail: f64, seed: u64) -> Result<EstimateReport> {
    estimate_born_with(circuit, Variant::Basis, epsilon, p_fail, seed, DEFAULT_STREAMS, Exec::default())
}

/// Characteristic-function variant of [`estimate_born`].
pub fn estimate_born_char(circuit: &Circuit, epsilon: f64, p_fail: f64, seed: u64) -> Result<EstimateReport> {
    estimate_born_with(circuit, Variant::Characteristic, epsilon, p_fail, seed, DEFAULT_STREAMS, Exec::default())
}

pub fn estimate_born_with(
    circuit: &Circuit,
    variant: Variant,
    epsilon: f64,
    p_fail: f64,
    seed: u64,
    streams: usize,
    exec: Exec,
) -> Result<EstimateReport> {
    let (stats, forward_norm, exact) = match variant {
        Variant::Basis => {
            let e = o_engine(circuit)?;
            let (m, exact) = e.forward_norm(seed);
            let k = sample_count(m, epsilon, p_fail)?;
            (e.run(k, seed, streams, exec)?, m, exact)
        }
        Variant::Characteristic => {
            let e = pauli_engine(circuit)?;
            let (m, exact) = e.forward_norm(seed);
            let k = sample_count(m, epsilon, p_fail)?;
            (e.run(k, seed, streams, exec)?, m, exact)
        }
    };
    Ok(EstimateReport {
        estimate: stats.mean,
        epsilon,
        failure_prob: p_fail,
        samples_used: stats.samples,
        forward_norm,
        forward_norm_exact: exact,
        seed,
        streams: stats.streams,
    })
}

/// Column x_U(·, λ) over the restricted domain for a gate on the whole register (dense path).
pub fn frame_unitary_coeffs(u: &DenseOperator, lambda: &[i64]) -> Vec<f64> {
    let system = u.system();
    let mut out = vec![0.0; Domain::Restricted.size(system)];
    for (j, v) in f64::dense_column(system, u.matrix(), lambda) {
        out[j] = v;
    }
    out
}

/// Column of a Clifford generator from its coordinate map: one ±1 entry.
pub fn frame_clifford_column(system: QuditSystem, kind: CliffordKind, targets: &[usize], lambda: &[i64]) -> Result<(usize, f64)> {
    let map = coordinate_action_on(system, kind, targets)?;
    Ok(f64::map_column(system.d(), &map, lambda)[0])
}

/// x_ρ(λ) = d^{−n} Tr[ρ O_λ] over the restricted domain.
pub fn frame_state_coeffs(rho: &DensityState) -> Vec<f64> {
    x_distribution(rho, Domain::Restricted).real_parts()
}

/// x_Π(λ) = Tr[Π O_λ] for every restricted λ.
pub fn frame_measurement_coeffs(system: QuditSystem, effect: &MeasurementEffect) -> Result<Vec<f64>> {
    let circuit = Circuit::new(DensityState::maximally_mixed(system), vec![], effect.clone())?;
    let e = o_engine(&circuit)?;
    let d = system.d();
    Ok((0..Domain::Restricted.size(system)).map(|i| e.measure_value(&index_to_coords(i, system.n(), d))).collect())
}

/// max_λ |x_Π(λ)|.
pub fn measurement_max(system: QuditSystem, effect: &MeasurementEffect) -> Result<f64> {
    let circuit = Circuit::new(DensityState::maximally_mixed(system), vec![], effect.clone())?;
    Ok(o_engine(&circuit)?.measure_max())
}
