//! Seeded randomness: RNG streams, random states and random Clifford words.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::operator::{CMatrix, DensityState};
use crate::pauli::{CliffordKind, CliffordOp};
use crate::system::QuditSystem;

/// Independent ChaCha stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state from a normalised complex Gaussian vector.
pub fn haar_pure_state<R: Rng + ?Sized>(system: QuditSystem, rng: &mut R) -> DensityState {
    let amps: Vec<Complex64> = (0..system.dim()).map(|_| gaussian(rng)).collect();
    DensityState::from_ket(system, &amps).expect("nonzero with probability one")
}

/// Full-rank random mixed state G G† / Tr(G G†) with Ginibre G.
pub fn random_mixed_state<R: Rng + ?Sized>(system: QuditSystem, rng: &mut R) -> DensityState {
    let dim = system.dim();
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityState::new(system, rho).expect("Ginibre construction is a valid state")
}

/// Uniform word of `len` generators on uniformly chosen targets (SUM only when n ≥ 2).
pub fn random_clifford_word<R: Rng + ?Sized>(system: QuditSystem, len: usize, rng: &mut R) -> Vec<CliffordOp> {
    let n = system.n();
    let kinds: Vec<CliffordKind> = CliffordKind::ALL.into_iter().filter(|k| k.arity() <= n).collect();
    (0..len)
        .map(|_| {
            let kind = kinds[rng.random_range(0..kinds.len())];
            let targets = if kind.arity() == 2 {
                let a = rng.random_range(0..n);
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                vec![a, b]
            } else {
                vec![rng.random_range(0..n)]
            };
            CliffordOp::new(kind, targets)
        })
        .collect()
}

/// Random Clifford conjugate U ρ U† by a word of length 10.
pub fn random_clifford_conjugate<R: Rng + ?Sized>(state: &DensityState, rng: &mut R) -> Result<DensityState> {
    let word = random_clifford_word(state.system(), 10, rng);
    state.evolve(&crate::pauli::word_unitary(state.system(), &word)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ_and_repeat() {
        let a: u64 = stream_rng(7, 0).random();
        let b: u64 = stream_rng(7, 1).random();
        let a2: u64 = stream_rng(7, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = stream_rng(1, 0);
        let s = QuditSystem::new(3, 2).unwrap();
        let psi = haar_pure_state(s, &mut rng);
        assert!((psi.purity() - 1.0).abs() < 1e-12);
        let rho = random_mixed_state(s, &mut rng);
        assert!(rho.purity() < 1.0);
    }

    #[test]
    fn words_respect_arity() {
        let mut rng = stream_rng(3, 0);
        let one = QuditSystem::new(2, 1).unwrap();
        assert!(random_clifford_word(one, 200, &mut rng).iter().all(|op| op.kind != CliffordKind::Sum));
        let two = QuditSystem::new(2, 3).unwrap();
        for op in random_clifford_word(two, 200, &mut rng) {
            assert_eq!(op.targets.len(), op.kind.arity());
            if op.targets.len() == 2 {
                assert_ne!(op.targets[0], op.targets[1]);
            }
        }
    }
}
