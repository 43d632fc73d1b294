//! Weak simulation of homodyne position measurements on GKP codewords after a Gaussian unitary.
//!
//! Phase-space vectors are ordered (q₁…q_n, p₁…p_n). A circuit maps a lattice point r to
//! S (r − displacement); the outcome is the q-block of that image.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{coordinate_action_on, index_to_coords, Domain, PhasePoint};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, split_counts, Exec};
use crate::gkp::{lattice_spacing, wigner_prefactor};
use crate::measures::x_distribution;
use crate::operator::DensityState;
use crate::pauli::{CliffordKind, CliffordOp};
use crate::qpsim::{Table, DEFAULT_STREAMS};
use crate::random::stream_rng;
use crate::system::QuditSystem;

pub const SYMPLECTIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianCircuit {
    pub n: usize,
    /// Row-major 2n × 2n.
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    pub displacement: Vec<f64>,
}

fn omega_matrix(n: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        w[(i, n + i)] = 1.0;
        w[(n + i, i)] = -1.0;
    }
    w
}

impl GaussianCircuit {
    pub fn new(n: usize, s: Vec<f64>, displacement: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQudits);
        }
        if s.len() != 4 * n * n || displacement.len() != 2 * n {
            return Err(Error::ShapeMismatch(format!(
                "need a {k}×{k} matrix and a length-{k} displacement, got {} entries and {}",
                s.len(),
                displacement.len(),
                k = 2 * n
            )));
        }
        if s.iter().chain(&displacement).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("circuit entries must be finite".into()));
        }
        let c = Self { n, s, displacement };
        let dev = c.symplectic_deviation();
        if dev > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic(dev));
        }
        Ok(c)
    }

    pub fn identity(n: usize) -> Self {
        let k = 2 * n;
        Self { n, s: DMatrix::<f64>::identity(k, k).transpose().as_slice().to_vec(), displacement: vec![0.0; k] }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(2 * self.n, 2 * self.n, &self.s)
    }

    /// ‖SᵀΩS − Ω‖_max
    pub fn symplectic_deviation(&self) -> f64 {
        let s = self.matrix();
        let w = omega_matrix(self.n);
        (s.transpose() * &w * &s - w).amax()
    }

    /// `next` applied after `self`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if next.n != self.n {
            return Err(Error::ShapeMismatch(format!("{} vs {} modes", self.n, next.n)));
        }
        let s1 = self.matrix();
        let s = next.matrix() * &s1;
        // S₁⁻¹ = −Ω S₁ᵀ Ω for symplectic S₁
        let w = omega_matrix(self.n);
        let inv = -(&w * s1.transpose() * &w);
        let disp = nalgebra::DVector::from_column_slice(&self.displacement) + inv * nalgebra::DVector::from_column_slice(&next.displacement);
        Ok(Self { n: self.n, s: s.transpose().as_slice().to_vec(), displacement: disp.as_slice().to_vec() })
    }

    /// S (r − displacement)
    pub fn image(&self, r: &[f64]) -> Vec<f64> {
        let k = 2 * self.n;
        let shifted: Vec<f64> = r.iter().zip(&self.displacement).map(|(a, b)| a - b).collect();
        (0..k).map(|i| (0..k).map(|j| self.s[i * k + j] * shifted[j]).sum()).collect()
    }
}

/// Gaussian implementing a Clifford generator on the code space, on `targets` of an n-mode register.
pub fn logical_clifford_on(system: QuditSystem, kind: CliffordKind, targets: &[usize]) -> Result<GaussianCircuit> {
    let (d, n) = (system.d(), system.n());
    let map = coordinate_action_on(system, kind, targets)?;
    let md = 2 * d as i64;
    let s: Vec<f64> = map.matrix.iter().map(|&v| if v > d as i64 { (v - md) as f64 } else { v as f64 }).collect();
    let mut c = vec![0.0; 2 * n];
    let q = targets[0];
    match kind {
        CliffordKind::Shift => c[q] = 2.0,
        CliffordKind::Clock => c[n + q] = -2.0,
        CliffordKind::Phase if d % 2 == 1 => c[n + q] = 1.0,
        _ => {}
    }
    // S (r − δ) = a (S u + c) for r = a u  ⇒  δ = −a S⁻¹ c
    let a = lattice_spacing(d);
    let sm = DMatrix::from_row_slice(2 * n, 2 * n, &s);
    let w = omega_matrix(n);
    let inv = -(&w * sm.transpose() * &w);
    let disp = inv * nalgebra::DVector::from_column_slice(&c) * (-a);
    GaussianCircuit::new(n, s, disp.as_slice().to_vec())
}

/// Gaussian for a generator acting on a register of exactly its arity.
pub fn logical_clifford_symplectic(system: QuditSystem, kind: CliffordKind) -> Result<GaussianCircuit> {
    if system.n() != kind.arity() {
        return Err(Error::ShapeMismatch(format!("{kind:?} acts on {} mode(s)", kind.arity())));
    }
    let targets: Vec<usize> = (0..kind.arity()).collect();
    logical_clifford_on(system, kind, &targets)
}

/// Gaussian for a word of generators applied left to right.
pub fn logical_clifford_word(system: QuditSystem, word: &[CliffordOp]) -> Result<GaussianCircuit> {
    word.iter().try_fold(GaussianCircuit::identity(system.n()), |acc, op| acc.then(&logical_clifford_on(system, op.kind, &op.targets)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSample {
    pub x: Vec<f64>,
    /// Lattice winding; always zero (unit-cell branch).
    pub branch: Vec<i64>,
    pub sampled_point: PhasePoint,
    pub sign: i8,
    pub weight: f64,
}

/// Unit-cell sampler for one state; reusable across circuits.
#[derive(Debug, Clone)]
pub struct HomodyneSampler {
    system: QuditSystem,
    table: Table<f64>,
    weight: f64,
}

impl HomodyneSampler {
    pub fn new(rho: &DensityState) -> Result<Self> {
        let system = rho.system();
        let x = x_distribution(rho, Domain::Full);
        let table = Table::new(x.values.iter().enumerate().map(|(i, v)| (i, v.re)));
        if table.norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let weight = table.norm * wigner_prefactor(system);
        Ok(Self { system, table, weight })
    }

    /// ‖x_ρ‖₁ over the full domain times (d/8π)^{n/2}.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn sample<R: rand::Rng>(&self, circuit: &GaussianCircuit, rng: &mut R) -> Result<HomodyneSample> {
        let (d, n) = (self.system.d(), self.system.n());
        if circuit.n != n {
            return Err(Error::ShapeMismatch(format!("circuit has {} modes, state has {n} qudits", circuit.n)));
        }
        let (i, v) = self.table.sample(rng);
        let u = index_to_coords(i, n, 2 * d);
        let a = lattice_spacing(d);
        let r: Vec<f64> = u.iter().map(|&x| a * x as f64).collect();
        let image = circuit.image(&r);
        Ok(HomodyneSample {
            x: image[..n].to_vec(),
            branch: vec![0; 2 * n],
            sampled_point: PhasePoint::from_coords(&u, 2 * d)?,
            sign: if v < 0.0 { -1 } else { 1 },
            weight: self.weight,
        })
    }
}

fn checked(circuit: &GaussianCircuit) -> Result<()> {
    let dev = circuit.symplectic_deviation();
    if dev > SYMPLECTIC_TOL {
        return Err(Error::NotSymplectic(dev));
    }
    Ok(())
}

/// One sample from the first seeded stream.
pub fn simulate_homodyne(rho: &DensityState, circuit: &GaussianCircuit, seed: u64) -> Result<HomodyneSample> {
    checked(circuit)?;
    HomodyneSampler::new(rho)?.sample(circuit, &mut stream_rng(seed, 0))
}

/// `num_samples` samples split across seeded streams, in stream order.
pub fn simulate_homodyne_batch(
    rho: &DensityState,
    circuit: &GaussianCircuit,
    num_samples: u64,
    seed: u64,
    streams: usize,
    exec: Exec,
) -> Result<Vec<HomodyneSample>> {
    checked(circuit)?;
    let sampler = HomodyneSampler::new(rho)?;
    let per = split_counts(num_samples, streams);
    let chunks = map_indexed(exec, per.len(), |s| {
        let mut rng = stream_rng(seed, s as u64);
        (0..per[s]).map(|_| sampler.sample(circuit, &mut rng)).collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(num_samples as usize);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub x: Vec<f64>,
    pub count: u64,
    /// Σ sign·weight / num_samples over the samples landing here.
    pub signed_weight: f64,
}

/// Signed, weighted histogram of outcomes; P̃ is a pseudo-probability, so the bins carry no
/// normalisation guarantee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoProbabilityReport {
    pub bins: Vec<HistogramBin>,
    pub num_samples: u64,
    pub seed: u64,
    pub non_normalizable: bool,
}

pub fn pseudo_probability_report(rho: &DensityState, circuit: &GaussianCircuit, num_samples: u64, seed: u64) -> Result<PseudoProbabilityReport> {
    pseudo_probability_report_with(rho, circuit, num_samples, seed, DEFAULT_STREAMS, Exec::default())
}

pub fn pseudo_probability_report_with(
    rho: &DensityState,
    circuit: &GaussianCircuit,
    num_samples: u64,
    seed: u64,
    streams: usize,
    exec: Exec,
) -> Result<PseudoProbabilityReport> {
    let samples = simulate_homodyne_batch(rho, circuit, num_samples, seed, streams, exec)?;
    // exact coordinates are reproducible, so bins are keyed by bit pattern
    let mut bins: BTreeMap<Vec<u64>, (Vec<f64>, u64, f64)> = BTreeMap::new();
    for s in &samples {
        let key: Vec<u64> = s.x.iter().map(|v| (v + 0.0).to_bits()).collect();
        let e = bins.entry(key).or_insert_with(|| (s.x.clone(), 0, 0.0));
        e.1 += 1;
        e.2 += s.sign as f64 * s.weight;
    }
    let mut bins: Vec<HistogramBin> =
        bins.into_values().map(|(x, count, w)| HistogramBin { x, count, signed_weight: w / num_samples as f64 }).collect();
    bins.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(PseudoProbabilityReport { bins, num_samples, seed, non_normalizable: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::coords_to_index;
    use crate::measures::x_distribution;
    use crate::pauli::{clifford_generator, word_unitary};
    use crate::random::{haar_pure_state, random_clifford_word};
    use std::f64::consts::PI;

    fn sys(d: usize, n: usize) -> QuditSystem {
        QuditSystem::new(d, n).unwrap()
    }

    #[test]
    fn named_gaussians() {
        for d in [2usize, 3, 5] {
            let s = sys(d, 1);
            let f = logical_clifford_symplectic(s, CliffordKind::Fourier).unwrap();
            assert_eq!(f.s, vec![0.0, 1.0, -1.0, 0.0]);
            assert!(f.displacement.iter().all(|&v| v == 0.0));
            let x = logical_clifford_symplectic(s, CliffordKind::Shift).unwrap();
            assert_eq!(x.s, vec![1.0, 0.0, 0.0, 1.0]);
            assert!((x.displacement[0] + (2.0 * PI / d as f64).sqrt()).abs() < 1e-15);
            let z = logical_clifford_symplectic(s, CliffordKind::Clock).unwrap();
            assert!((z.displacement[1] - (2.0 * PI / d as f64).sqrt()).abs() < 1e-15);
            let p = logical_clifford_symplectic(s, CliffordKind::Phase).unwrap();
            assert_eq!(p.s, vec![1.0, 0.0, -1.0, 1.0]);
        }
        let sum = logical_clifford_symplectic(sys(3, 2), CliffordKind::Sum).unwrap();
        assert!(sum.symplectic_deviation() < 1e-15);
        assert_eq!(GaussianCircuit::identity(2).image(&[1.0, 2.0, 3.0, 4.0]), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn rejects_non_symplectic() {
        assert!(matches!(GaussianCircuit::new(1, vec![2.0, 0.0, 0.0, 1.0], vec![0.0; 2]), Err(Error::NotSymplectic(_))));
        assert!(GaussianCircuit::new(1, vec![2.0, 0.0, 0.0, 0.5], vec![0.0; 2]).is_ok());
        assert!(GaussianCircuit::new(1, vec![1.0; 3], vec![0.0; 2]).is_err());
    }

    /// The lattice image of u under a logical Clifford Gaussian is the coordinate map of the
    /// generator, so mapped coefficients must equal those of the conjugated state.
    #[test]
    fn lattice_covariance_of_coefficients() {
        let mut rng = stream_rng(4, 0);
        for d in [2usize, 3, 4] {
            for n in [1usize, 2] {
                let s = sys(d, n);
                let word = random_clifford_word(s, 6, &mut rng);
                let g = logical_clifford_word(s, &word).unwrap();
                let u_op = word_unitary(s, &word).unwrap();
                let rho = haar_pure_state(s, &mut rng);
                let before = x_distribution(&rho, Domain::Full);
                let after = x_distribution(&rho.evolve(&u_op).unwrap(), Domain::Full);
                let a = lattice_spacing(d);
                for i in 0..before.len() {
                    let u = index_to_coords(i, n, 2 * d);
                    let r: Vec<f64> = u.iter().map(|&v| a * v as f64).collect();
                    let img: Vec<i64> = g.image(&r).iter().map(|v| (v / a).round() as i64).collect();
                    assert!(g.image(&r).iter().zip(&img).all(|(v, k)| (v / a - *k as f64).abs() < 1e-9));
                    let j = coords_to_index(&img.iter().map(|v| v.rem_euclid(2 * d as i64)).collect::<Vec<_>>(), 2 * d);
                    assert!((before.values[i] - after.values[j]).norm() < 1e-10, "d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn identity_samples_sit_on_support() {
        let s = sys(2, 1);
        let rho = DensityState::basis(s, 0).unwrap();
        let x = x_distribution(&rho, Domain::Full);
        let a = lattice_spacing(2);
        let samples = simulate_homodyne_batch(&rho, &GaussianCircuit::identity(1), 500, 1, 4, Exec::Sequential).unwrap();
        for smp in &samples {
            let l = (smp.x[0] / a).round();
            assert_eq!(smp.x[0], a * l);
            assert_eq!(smp.x[0], a * smp.sampled_point.l[0] as f64);
            assert!(x.at(&smp.sampled_point.coords()).re.abs() > 1e-12);
            assert_eq!(smp.branch, vec![0, 0]);
        }
    }

    #[test]
    fn fourier_matches_plus_support() {
        let s = sys(3, 1);
        let rho = DensityState::basis(s, 0).unwrap();
        let f = logical_clifford_symplectic(s, CliffordKind::Fourier).unwrap();
        let plus = rho.evolve(&clifford_generator(s, CliffordKind::Fourier).unwrap()).unwrap();
        let xp = x_distribution(&plus, Domain::Full);
        let a = lattice_spacing(3);
        let allowed: Vec<i64> = (0..6).filter(|&l| (0..6).any(|m| xp.at(&[l, m]).re.abs() > 1e-12)).collect();
        for smp in simulate_homodyne_batch(&rho, &f, 300, 2, 4, Exec::Parallel).unwrap() {
            let l = (smp.x[0] / a).round() as i64;
            assert!(allowed.contains(&l.rem_euclid(6)), "{l}");
        }
    }

    #[test]
    fn reproducible_and_mode_independent() {
        let s = sys(3, 1);
        let rho = haar_pure_state(s, &mut stream_rng(1, 1));
        let g = logical_clifford_symplectic(s, CliffordKind::Phase).unwrap();
        let a = simulate_homodyne_batch(&rho, &g, 200, 7, 8, Exec::Sequential).unwrap();
        let b = simulate_homodyne_batch(&rho, &g, 200, 7, 8, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(simulate_homodyne(&rho, &g, 7).unwrap(), a[0]);
    }

    #[test]
    fn histogram_cases() {
        let s = sys(3, 1);
        let rho = DensityState::basis(s, 1).unwrap();
        let g = logical_clifford_symplectic(s, CliffordKind::Fourier).unwrap();
        let empty = pseudo_probability_report(&rho, &g, 0, 1).unwrap();
        assert!(empty.bins.is_empty() && empty.non_normalizable);
        let rep = pseudo_probability_report(&rho, &g, 2000, 1).unwrap();
        assert_eq!(rep.bins.iter().map(|b| b.count).sum::<u64>(), 2000);
        // pure stabilizer input: a single weight magnitude
        let w = HomodyneSampler::new(&rho).unwrap().weight();
        for smp in simulate_homodyne_batch(&rho, &g, 200, 3, 2, Exec::Sequential).unwrap() {
            assert_eq!(smp.weight, w);
        }
        let mixed = DensityState::maximally_mixed(sys(2, 1));
        let a = lattice_spacing(2);
        let rep = pseudo_probability_report(&mixed, &GaussianCircuit::identity(1), 500, 5).unwrap();
        for b in &rep.bins {
            assert_eq!(((b.x[0] / a).round() as i64).rem_euclid(2), 0);
        }
    }
}
