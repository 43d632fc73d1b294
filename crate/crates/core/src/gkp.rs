//! Exact lattice coefficients of GKP-encoded states and the cell-norm identities.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{index_to_coords, o_monomial, Domain};
use crate::error::{Error, Result};
use crate::measures::{characteristic_fn, lp_norm_values, stabilizer_renyi, x_distribution, ZERO_CUTOFF};
use crate::operator::{cis, DensityState};
use crate::pauli::omega;
use crate::system::QuditSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GkpKind {
    Wigner,
    Characteristic,
}

/// Weights of the delta peaks in one unit cell, indexed over Z_{2d}^{2n}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkpLatticeCoefficients {
    pub system: QuditSystem,
    pub kind: GkpKind,
    pub values: Vec<Complex64>,
    pub prefactor: f64,
}

/// Peak spacing √(π/2d) in both quadratures.
pub fn lattice_spacing(d: usize) -> f64 {
    (PI / (2.0 * d as f64)).sqrt()
}

pub fn wigner_prefactor(system: QuditSystem) -> f64 {
    (system.d() as f64 / (8.0 * PI)).powf(system.n() as f64 / 2.0)
}

pub fn char_prefactor(system: QuditSystem) -> f64 {
    (2.0 * PI / system.d() as f64).powf(system.n() as f64 / 2.0)
}

/// c(u) = d^{−n} Tr[O_u ρ] evaluated directly at every full-domain label.
pub fn gkp_wigner_coefficients(rho: &DensityState) -> GkpLatticeCoefficients {
    let system = rho.system();
    let md = 2 * system.d();
    let norm = system.dim() as f64;
    let values = (0..Domain::Full.size(system))
        .map(|i| {
            let u = index_to_coords(i, system.n(), md);
            Complex64::new(o_monomial(system, &u).trace_with(rho.matrix()).re / norm, 0.0)
        })
        .collect();
    GkpLatticeCoefficients { system, kind: GkpKind::Wigner, values, prefactor: wigner_prefactor(system) }
}

/// γ(u) = d^n e^{−iπ l·m/d} ω^{−l·m/2} χ(u)* over the full domain.
pub fn gkp_char_coefficients(rho: &DensityState) -> GkpLatticeCoefficients {
    let system = rho.system();
    let (d, n) = (system.d(), system.n());
    let chi = characteristic_fn(rho, Domain::Full);
    let scale = system.dim() as f64;
    let values = chi
        .values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let u = index_to_coords(i, n, 2 * d);
            let lm: i64 = (0..n).map(|q| u[q] * u[n + q]).sum();
            let half = if d % 2 == 1 {
                omega(d, -lm * ((d as i64 + 1) / 2))
            } else {
                cis(-PI * lm as f64 / d as f64)
            };
            cis(-PI * lm as f64 / d as f64) * half * x.conj() * scale
        })
        .collect();
    GkpLatticeCoefficients { system, kind: GkpKind::Characteristic, values, prefactor: char_prefactor(system) }
}

/// (Σ_u (prefactor·|value(u)|)^p)^{1/p} over the unit cell.
pub fn cell_lp_norm(coeffs: &GkpLatticeCoefficients, p: f64) -> Result<f64> {
    let cut: Vec<Complex64> = coeffs.values.iter().map(|v| if v.norm() < ZERO_CUTOFF { Complex64::new(0.0, 0.0) } else { v * coeffs.prefactor }).collect();
    lp_norm_values(&cut, p)
}

/// Cell norm shared by every pure stabilizer state.
pub fn stabilizer_cell_norm(system: QuditSystem, kind: GkpKind, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidArgument(format!("p must be positive, got {p}")));
    }
    let (d, n) = (system.d() as f64, system.n() as f64);
    Ok(match kind {
        GkpKind::Wigner => (4.0 * d).powf(n / p) / (8.0 * PI * d).powf(n / 2.0),
        GkpKind::Characteristic => (2.0 * PI / d).powf(n / 2.0) * (4.0 * d).powf(n / p),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub d: usize,
    pub n: usize,
    pub p: f64,
    /// d^{n(1−1/p)} times the discrete norm.
    pub lhs: f64,
    /// Cell norm of the state over the cell norm of |0…0⟩.
    pub rhs: f64,
    pub residual: f64,
    /// Odd d only: d^{n(1−1/p)}‖W‖_p.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wigner_lhs: Option<f64>,
    /// Stabilizer Rényi entropy rebuilt from the cell ratio with α = p/2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renyi_from_cells: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renyi_direct: Option<f64>,
}

fn reference_state(system: QuditSystem) -> DensityState {
    DensityState::basis(system, 0).expect("index 0 exists")
}

/// Discrete norm of x against the ratio of Wigner cell norms.
pub fn verify_wigner_cell_identity(rho: &DensityState, p: f64) -> Result<IdentityReport> {
    let system = rho.system();
    let (d, n) = (system.d(), system.n());
    let scale = (d as f64).powf(n as f64 * (1.0 - 1.0 / p));
    let lhs = scale * x_distribution(rho, Domain::Restricted).lp_norm(p)?;
    let rhs = cell_lp_norm(&gkp_wigner_coefficients(rho), p)?
        / cell_lp_norm(&gkp_wigner_coefficients(&reference_state(system)), p)?;
    let wigner_lhs = if system.is_odd() {
        Some(scale * crate::measures::discrete_wigner(rho)?.lp_norm(p)?)
    } else {
        None
    };
    Ok(IdentityReport { d, n, p, lhs, rhs, residual: (lhs - rhs).abs(), wigner_lhs, renyi_from_cells: None, renyi_direct: None })
}

/// Discrete norm of χ against the ratio of characteristic cell norms, plus the
/// stabilizer Rényi entropy M_{p/2} rebuilt from that ratio.
pub fn verify_char_cell_identity(rho: &DensityState, p: f64) -> Result<IdentityReport> {
    let system = rho.system();
    let (d, n) = (system.d(), system.n());
    let scale = (d as f64).powf(n as f64 * (1.0 - 1.0 / p));
    let lhs = scale * characteristic_fn(rho, Domain::Restricted).lp_norm(p)?;
    let rhs = cell_lp_norm(&gkp_char_coefficients(rho), p)?
        / cell_lp_norm(&gkp_char_coefficients(&reference_state(system)), p)?;
    let alpha = p / 2.0;
    let (renyi_from_cells, renyi_direct) = if (alpha - 1.0).abs() > 1e-12 {
        (Some(renyi_from_ratio(rhs, alpha)), Some(stabilizer_renyi(rho, alpha)?))
    } else {
        (None, None)
    };
    Ok(IdentityReport { d, n, p, lhs, rhs, residual: (lhs - rhs).abs(), wigner_lhs: None, renyi_from_cells, renyi_direct })
}

/// M_α = 2α/(1−α) · ln R, where R is the characteristic cell-norm ratio at p = 2α.
pub fn renyi_from_ratio(ratio: f64, alpha: f64) -> f64 {
    2.0 * alpha / (1.0 - alpha) * ratio.ln()
}
