//! Stabilizer states from generators, their sparse x-coefficients and single-qudit enumeration.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{coords_to_index, index_to_coords, reduce_point, Domain};
use crate::error::{Error, Result};
use crate::measures::QuasiDistribution;
use crate::operator::{CMatrix, DensityState};
use crate::pauli::{hw_monomial, omega, symplectic_form};
use crate::system::QuditSystem;

/// Generators s_i ∈ Z_d^{2n} with eigenvalue bookkeeping v: the state is fixed by ω^{vᵀΩs}P(s).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerGroup {
    pub system: QuditSystem,
    pub generators: Vec<Vec<i64>>,
    pub phase_vector: Vec<i64>,
}

impl StabilizerGroup {
    pub fn new(system: QuditSystem, generators: Vec<Vec<i64>>, phase_vector: Vec<i64>) -> Result<Self> {
        let (d, n) = (system.d(), system.n());
        let di = d as i64;
        if phase_vector.len() != 2 * n || generators.iter().any(|g| g.len() != 2 * n) {
            return Err(Error::ShapeMismatch(format!("generators and phase vector need {} entries", 2 * n)));
        }
        let generators: Vec<Vec<i64>> =
            generators.into_iter().map(|g| g.into_iter().map(|x| x.rem_euclid(di)).collect()).collect();
        let phase_vector = phase_vector.into_iter().map(|x| x.rem_euclid(di)).collect();
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if symplectic_form(&generators[i], &generators[j]).rem_euclid(di) != 0 {
                    return Err(Error::NonCommutingGenerators(i, j));
                }
            }
        }
        let order = span_size(d, &generators);
        if order != system.dim() {
            return Err(Error::DependentGenerators { found: order, expected: system.dim() });
        }
        Ok(Self { system, generators, phase_vector })
    }

    /// Group from generators ω^{phase_i} P(s_i), solving vᵀΩs_i ≡ phase_i (mod d) by search.
    pub fn from_phases(system: QuditSystem, generators: Vec<Vec<i64>>, phases: &[i64]) -> Result<Self> {
        let (d, n) = (system.d(), system.n());
        if phases.len() != generators.len() {
            return Err(Error::ShapeMismatch("one phase per generator".into()));
        }
        let probe = Self::new(system, generators, vec![0; 2 * n])?;
        let total = (d as u128).pow(2 * n as u32);
        if total > 1 << 24 {
            return Err(Error::Unsupported(format!("phase search over {total} candidates")));
        }
        let di = d as i64;
        for idx in 0..total as usize {
            let v = index_to_coords(idx, n, d);
            if probe
                .generators
                .iter()
                .zip(phases)
                .all(|(s, &ph)| (symplectic_form(&v, s) - ph).rem_euclid(di) == 0)
            {
                return Ok(Self { phase_vector: v, ..probe });
            }
        }
        Err(Error::InconsistentPhases("no phase vector realises the requested eigenvalues".into()))
    }

    /// One generator per line as `a1,…,an|b1,…,bn|phase` (phase is an exponent of ω_d).
    pub fn parse(system: QuditSystem, text: &str) -> Result<Self> {
        let n = system.n();
        let mut gens = Vec::new();
        let mut phases = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::InvalidArgument(format!("generator line {}: {msg}", lineno + 1));
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 3 {
                return Err(bad("expected a|b|phase"));
            }
            let nums = |s: &str| -> Result<Vec<i64>> {
                s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad("not an integer"))).collect()
            };
            let (a, b) = (nums(parts[0])?, nums(parts[1])?);
            if a.len() != n || b.len() != n {
                return Err(bad(&format!("expected {n} entries per block")));
            }
            let ph = parts[2].trim().parse::<i64>().map_err(|_| bad("phase is not an integer"))?;
            gens.push(a.into_iter().chain(b).collect());
            phases.push(ph);
        }
        Self::from_phases(system, gens, &phases)
    }

    /// ω^{vᵀΩs} for a group element s.
    fn element_phase(&self, s: &[i64]) -> Complex64 {
        omega(self.system.d(), symplectic_form(&self.phase_vector, s))
    }
}

fn span_size(d: usize, gens: &[Vec<i64>]) -> usize {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let k = gens.first().map_or(0, |g| g.len());
    seen.insert(vec![0; k]);
    let mut frontier = vec![vec![0; k]];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(d as i64)).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.len()
}

/// Product of the projectors (1/d) Σ_k g_i^k over the phased generators.
pub fn stabilizer_state(group: &StabilizerGroup) -> Result<DensityState> {
    let system = group.system;
    let (d, dim) = (system.d(), system.dim());
    let mut rho = CMatrix::identity(dim, dim);
    for s in &group.generators {
        let g = hw_monomial(system, s).to_dense() * group.element_phase(s);
        let mut proj = CMatrix::zeros(dim, dim);
        let mut pw = CMatrix::identity(dim, dim);
        for _ in 0..d {
            proj += &pw;
            pw = &pw * &g;
        }
        rho *= proj.unscale(d as f64);
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::InconsistentPhases(format!("projector product has trace {tr:.6}")));
    }
    let state = DensityState::new(system, rho)?;
    if (state.purity() - 1.0).abs() > 1e-9 {
        return Err(Error::Internal(format!("stabilizer state purity {}", state.purity())));
    }
    Ok(state)
}

/// x-coefficients of a stabilizer state straight from its generators.
///
/// For k ∈ Z_{2d}^g the point a = Σ k_i s_i + 2v (mod 2d) carries
/// x(a_l, −a_m) = d^{−n} (−1)^e with
/// e = Σ_{i<j} k_i k_j (s_iᵀΩs_j)/d + [d odd] Σ_i k_i (s_i,a · s_i,b).
pub fn stabilizer_x_sparse(group: &StabilizerGroup) -> Result<QuasiDistribution> {
    let system = group.system;
    let (d, n) = (system.d(), system.n());
    let md = 2 * d as i64;
    let g = group.generators.len();
    let pair: Vec<Vec<i64>> = (0..g)
        .map(|i| (0..g).map(|j| symplectic_form(&group.generators[i], &group.generators[j]) / d as i64).collect())
        .collect();
    let self_dot: Vec<i64> =
        group.generators.iter().map(|s| (0..n).map(|q| s[q] * s[n + q]).sum()).collect();
    let value = 1.0 / system.dim() as f64;
    let mut restricted: HashMap<usize, i8> = HashMap::new();
    for kidx in 0..(2 * d).pow(g as u32) {
        let mut k = vec![0i64; g];
        let mut rest = kidx;
        for slot in k.iter_mut().rev() {
            *slot = (rest % (2 * d)) as i64;
            rest /= 2 * d;
        }
        let mut e: i64 = 0;
        for i in 0..g {
            for j in i + 1..g {
                e += k[i] * k[j] * pair[i][j];
            }
            if d % 2 == 1 {
                e += k[i] * self_dot[i];
            }
        }
        let mut full = vec![0i64; 2 * n];
        for (c, slot) in full.iter_mut().enumerate() {
            let a: i64 = (0..g).map(|i| k[i] * group.generators[i][c]).sum::<i64>() + 2 * group.phase_vector[c];
            *slot = if c < n { a.rem_euclid(md) } else { (-a).rem_euclid(md) };
        }
        let (r, shift_sign) = reduce_point(d, &full);
        let sign = if e.rem_euclid(2) == 0 { shift_sign } else { -shift_sign };
        let idx = coords_to_index(&r, d);
        if let Some(prev) = restricted.insert(idx, sign) {
            if prev != sign {
                return Err(Error::Internal(format!("conflicting signs at restricted point {r:?}")));
            }
        }
    }
    let mut values = vec![Complex64::new(0.0, 0.0); Domain::Restricted.size(system)];
    for (idx, s) in restricted {
        values[idx] = Complex64::new(s as f64 * value, 0.0);
    }
    Ok(QuasiDistribution { system, domain: Domain::Restricted, values }.to_full())
}

/// Single-qudit stabilizer groups: one or two commuting generators spanning d elements,
/// with every phase vector. Only prime d and d = 4 are supported.
pub fn enumerate_single_qudit_stabilizer_groups(d: usize) -> Result<Vec<StabilizerGroup>> {
    let prime = d >= 2 && (2..d).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k));
    if !prime && d != 4 {
        return Err(Error::Unsupported(format!("stabilizer enumeration for d = {d}")));
    }
    let system = QuditSystem::new(d, 1)?;
    let di = d as i64;
    let labels: Vec<Vec<i64>> = (1..d * d).map(|i| index_to_coords(i, 1, d)).collect();
    let mut gen_sets: Vec<Vec<Vec<i64>>> = labels.iter().map(|s| vec![s.clone()]).collect();
    if !prime {
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                gen_sets.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    let mut out = Vec::new();
    let mut states: Vec<DensityState> = Vec::new();
    let mut subgroups: HashSet<Vec<usize>> = HashSet::new();
    for gens in gen_sets {
        if span_size(d, &gens) != d {
            continue;
        }
        if gens.len() == 2 && symplectic_form(&gens[0], &gens[1]).rem_euclid(di) != 0 {
            continue;
        }
        let mut key: Vec<usize> = span_elements(d, &gens).iter().map(|s| coords_to_index(s, d)).collect();
        key.sort_unstable();
        if !subgroups.insert(key) {
            continue;
        }
        for vidx in 0..d * d {
            let group = StabilizerGroup::new(system, gens.clone(), index_to_coords(vidx, 1, d))?;
            let Ok(state) = stabilizer_state(&group) else { continue };
            if states.iter().any(|s| s.overlap(&state) > 1.0 - 1e-9) {
                continue;
            }
            states.push(state);
            out.push(group);
        }
    }
    Ok(out)
}

fn span_elements(d: usize, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let k = gens[0].len();
    let mut frontier = vec![vec![0; k]];
    seen.insert(vec![0; k]);
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(d as i64)).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn enumerate_single_qudit_stabilizers(d: usize) -> Result<Vec<DensityState>> {
    enumerate_single_qudit_stabilizer_groups(d)?.iter().map(stabilizer_state).collect()
}

/// Random group of n commuting independent generators with a random phase vector.
pub fn random_group<R: Rng + ?Sized>(system: QuditSystem, rng: &mut R) -> StabilizerGroup {
    let (d, n) = (system.d(), system.n());
    let di = d as i64;
    let mut cand: Vec<Vec<i64>> = (1..d.pow(2 * n as u32)).map(|i| index_to_coords(i, n, d)).collect();
    loop {
        cand.shuffle(rng);
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for s in &cand {
            if gens.iter().all(|g| symplectic_form(s, g).rem_euclid(di) == 0) {
                gens.push(s.clone());
                if span_size(d, &gens) != d.pow(gens.len() as u32) {
                    gens.pop();
                }
            }
            if gens.len() == n {
                let v = (0..2 * n).map(|_| rng.random_range(0..di)).collect();
                return StabilizerGroup::new(system, gens, v).expect("validated during search");
            }
        }
    }
}
