use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{coords_to_index, index_to_coords, o_monomial, o_trace_coords, reduce_point, Domain};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Exec};
use crate::operator::DensityState;
use crate::pauli::{hw_monomial, omega, symplectic_form};
use crate::system::QuditSystem;

/// Values below this magnitude are dropped before norm accumulation.
pub const ZERO_CUTOFF: f64 = 1e-12;

/// Function on phase space stored densely in lexicographic point order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiDistribution {
    pub system: QuditSystem,
    pub domain: Domain,
    pub values: Vec<Complex64>,
}

impl QuasiDistribution {
    pub fn modulus(&self) -> usize {
        self.domain.modulus(self.system.d())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, coords: &[i64]) -> Complex64 {
        self.values[coords_to_index(coords, self.modulus())]
    }

    pub fn coords(&self, index: usize) -> Vec<i64> {
        index_to_coords(index, self.system.n(), self.modulus())
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm_values(&self.values, p)
    }

    pub fn nonzero_count(&self, tol: f64) -> usize {
        self.values.iter().filter(|v| v.norm() > tol).count()
    }

    /// Restricted distribution extended to Z_{2d}^{2n} with the phase-shift signs of O.
    pub fn to_full(&self) -> Self {
        if self.domain == Domain::Full {
            return self.clone();
        }
        let d = self.system.d();
        let size = Domain::Full.size(self.system);
        let values = (0..size)
            .map(|i| {
                let (r, s) = reduce_point(d, &index_to_coords(i, self.system.n(), 2 * d));
                self.at(&r) * s as f64
            })
            .collect();
        Self { system: self.system, domain: Domain::Full, values }
    }

    /// Restriction of a full-domain distribution to l, m ∈ [0, d).
    pub fn to_restricted(&self) -> Self {
        if self.domain == Domain::Restricted {
            return self.clone();
        }
        let d = self.system.d();
        let size = Domain::Restricted.size(self.system);
        let values = (0..size).map(|i| self.at(&index_to_coords(i, self.system.n(), d))).collect();
        Self { system: self.system, domain: Domain::Restricted, values }
    }
}

/// (Σ|f|^p)^{1/p} over the given values.
pub fn lp_norm_values(values: &[Complex64], p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::InvalidArgument(format!("p must be positive and finite, got {p}")));
    }
    let s: f64 = values.iter().map(|v| v.norm()).filter(|&a| a >= ZERO_CUTOFF).map(|a| a.powf(p)).sum();
    Ok(s.powf(1.0 / p))
}

pub fn lp_norm(dist: &QuasiDistribution, p: f64) -> Result<f64> {
    dist.lp_norm(p)
}

/// x_ρ(u) = d^{−n} Tr[O_u ρ].
pub fn x_distribution(rho: &DensityState, domain: Domain) -> QuasiDistribution {
    let system = rho.system();
    let d = system.d();
    let norm = system.dim() as f64;
    let size = Domain::Restricted.size(system);
    let values = (0..size)
        .map(|i| {
            let u = index_to_coords(i, system.n(), d);
            Complex64::new(o_monomial(system, &u).trace_with(rho.matrix()).re / norm, 0.0)
        })
        .collect();
    let restricted = QuasiDistribution { system, domain: Domain::Restricted, values };
    match domain {
        Domain::Restricted => restricted,
        Domain::Full => restricted.to_full(),
    }
}

/// χ(u) = d^{−n} Tr[ρ P(u)†]; on the full domain the labels run over [0, 2d).
pub fn characteristic_fn(rho: &DensityState, domain: Domain) -> QuasiDistribution {
    let system = rho.system();
    let md = domain.modulus(system.d());
    let norm = system.dim() as f64;
    let values = (0..domain.size(system))
        .map(|i| hw_monomial(system, &index_to_coords(i, system.n(), md)).trace_with_adjoint(rho.matrix()) / norm)
        .collect();
    QuasiDistribution { system, domain, values }
}

/// W(u) = d^{−n} Σ_v ω^{−uᵀΩv} χ(v), defined for odd d.
pub fn discrete_wigner(rho: &DensityState) -> Result<QuasiDistribution> {
    let system = rho.system();
    let d = system.d();
    if !system.is_odd() {
        return Err(Error::EvenDimension(d));
    }
    let n = system.n();
    let chi = characteristic_fn(rho, Domain::Restricted);
    let pts: Vec<Vec<i64>> = (0..chi.len()).map(|i| index_to_coords(i, n, d)).collect();
    let norm = system.dim() as f64;
    let mut values = Vec::with_capacity(pts.len());
    for u in &pts {
        let w: Complex64 = pts.iter().zip(&chi.values).map(|(v, x)| omega(d, -symplectic_form(u, v)) * x).sum();
        let w = w / norm;
        if w.im.abs() > 1e-10 {
            return Err(Error::Internal(format!("Wigner value with imaginary part {:.3e}", w.im)));
        }
        values.push(Complex64::new(w.re, 0.0));
    }
    Ok(QuasiDistribution { system, domain: Domain::Restricted, values })
}

/// ‖x_ρ‖₁ over Z_d^{2n}.
pub fn magic_negativity(rho: &DensityState) -> f64 {
    x_distribution(rho, Domain::Restricted).lp_norm(1.0).expect("p = 1 is valid")
}

/// Σ_u x(u) Tr[O_u], which equals Tr ρ = 1.
pub fn normalization_sum(x: &QuasiDistribution) -> f64 {
    let n = x.system.n();
    let r = x.to_restricted();
    (0..r.len()).map(|i| r.values[i].re * o_trace_coords(r.system, &index_to_coords(i, n, r.system.d()))).sum()
}

/// Stabilizer Rényi entropy M_α = (1−α)^{−1} ln Σ_P (d^{−n}|Tr ρP|²)^α − n ln d, in nats.
pub fn stabilizer_renyi(rho: &DensityState, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let system = rho.system();
    let d = system.d();
    let n = system.n();
    let dim = system.dim() as f64;
    let size = Domain::Restricted.size(system);
    let s: f64 = (0..size)
        .map(|i| {
            let t = hw_monomial(system, &index_to_coords(i, n, d)).trace_with(rho.matrix()).norm_sqr() / dim;
            if t < ZERO_CUTOFF * ZERO_CUTOFF {
                0.0
            } else {
                t.powf(alpha)
            }
        })
        .sum();
    Ok(s.ln() / (1.0 - alpha) - dim.ln())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    if (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidArgument("alpha = 1 (the von Neumann limit) is not implemented".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperpolyhedral {
    pub hyperpolyhedral: bool,
    pub norm: f64,
}

/// ‖x_ρ‖₁ ≤ 1 test (cost at or below a stabilizer state in the simulator).
pub fn is_hyperpolyhedral(rho: &DensityState) -> Hyperpolyhedral {
    let norm = magic_negativity(rho);
    Hyperpolyhedral { hyperpolyhedral: norm <= 1.0 + 1e-12, norm }
}

/// ‖W‖₁ and the summed magnitude of the negative entries, (‖W‖₁ − 1)/2. Odd d only.
pub fn wigner_negativity(rho: &DensityState) -> Result<(f64, f64)> {
    let w = discrete_wigner(rho)?;
    let l1 = w.lp_norm(1.0)?;
    Ok((l1, (l1 - 1.0) / 2.0))
}

/// ‖x_ρ‖₁ for many states.
pub fn batch_negativity(states: &[DensityState], exec: Exec) -> Vec<f64> {
    map_indexed(exec, states.len(), |i| magic_negativity(&states[i]))
}
