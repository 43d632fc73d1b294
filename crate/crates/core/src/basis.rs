use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, cis, CMatrix, DenseOperator, Monomial};
use crate::pauli::{hw_monomial, modp, omega, symplectic_form, CliffordKind};
use crate::system::QuditSystem;

/// Which copy of phase space a distribution lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// l, m ∈ Z_d
    Restricted,
    /// l, m ∈ Z_{2d}, the unit cell of the GKP lattice
    Full,
}

impl Domain {
    pub fn modulus(self, d: usize) -> usize {
        match self {
            Domain::Restricted => d,
            Domain::Full => 2 * d,
        }
    }

    /// Number of points for n qudits.
    pub fn size(self, system: QuditSystem) -> usize {
        self.modulus(system.d()).pow(2 * system.n() as u32)
    }
}

/// Coordinates (l_1..l_n, m_1..m_n) reduced mod `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePoint {
    pub l: Vec<usize>,
    pub m: Vec<usize>,
    pub modulus: usize,
}

impl PhasePoint {
    pub fn new(l: &[i64], m: &[i64], modulus: usize) -> Result<Self> {
        if l.len() != m.len() || l.is_empty() {
            return Err(Error::ShapeMismatch("l and m must have the same nonzero length".into()));
        }
        Ok(Self {
            l: l.iter().map(|&x| modp(x, modulus)).collect(),
            m: m.iter().map(|&x| modp(x, modulus)).collect(),
            modulus,
        })
    }

    pub fn from_coords(coords: &[i64], modulus: usize) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::ShapeMismatch("odd coordinate count".into()));
        }
        let n = coords.len() / 2;
        Self::new(&coords[..n], &coords[n..], modulus)
    }

    pub fn from_index(index: usize, n: usize, modulus: usize) -> Self {
        Self::from_coords(&index_to_coords(index, n, modulus), modulus).expect("well formed")
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }

    pub fn coords(&self) -> Vec<i64> {
        self.l.iter().chain(&self.m).map(|&x| x as i64).collect()
    }

    pub fn index(&self) -> usize {
        coords_to_index(&self.coords(), self.modulus)
    }
}

/// Lexicographic index of (l_1..l_n, m_1..m_n), first coordinate most significant.
pub fn coords_to_index(coords: &[i64], modulus: usize) -> usize {
    coords.iter().fold(0, |acc, &x| acc * modulus + modp(x, modulus))
}

pub fn index_to_coords(mut index: usize, n: usize, modulus: usize) -> Vec<i64> {
    let mut out = vec![0i64; 2 * n];
    for k in (0..2 * n).rev() {
        out[k] = (index % modulus) as i64;
        index /= modulus;
    }
    out
}

/// M_l = Σ_{u+v ≡ l} |u⟩⟨v| on one qudit.
pub fn m_operator(system: QuditSystem, l: i64) -> DenseOperator {
    let d = system.d();
    let lm = modp(l, d);
    let m = CMatrix::from_fn(d, d, |u, v| if (u + v) % d == lm { c(1.0, 0.0) } else { c(0.0, 0.0) });
    DenseOperator::new(system.single(), m).expect("square")
}

/// Single-factor O_{l,m} = e^{−iπml/d} M_l Z^m for integer l, m.
pub(crate) fn o_factor(d: usize, l: i64, m: i64) -> Monomial {
    let phase = cis(-PI * (m * l) as f64 / d as f64);
    let lm = modp(l, d);
    let mut cols = Vec::with_capacity(d);
    let mut vals = Vec::with_capacity(d);
    for u in 0..d {
        let v = (lm + d - u) % d;
        cols.push(v);
        vals.push(phase * omega(d, m * v as i64));
    }
    Monomial { cols, vals }
}

/// ⊗_i O_{l_i, m_i} for integer coordinates (l, m).
pub fn o_monomial(system: QuditSystem, coords: &[i64]) -> Monomial {
    let n = system.n();
    let mut out = Monomial::identity(1);
    for i in 0..n {
        out = out.tensor(&o_factor(system.d(), coords[i], coords[n + i]));
    }
    out
}

pub fn o_operator(system: QuditSystem, point: &PhasePoint) -> Result<DenseOperator> {
    check_point(system, point)?;
    DenseOperator::new(system, o_monomial(system, &point.coords()).to_dense())
}

/// Closed-form Tr O_{l,m}, a product of per-qudit factors.
pub fn o_trace(system: QuditSystem, point: &PhasePoint) -> Result<f64> {
    check_point(system, point)?;
    Ok(o_trace_coords(system, &point.coords()))
}

pub(crate) fn o_trace_coords(system: QuditSystem, coords: &[i64]) -> f64 {
    let n = system.n();
    let d = system.d();
    (0..n)
        .map(|i| {
            let (l, m) = (coords[i].rem_euclid(2 * d as i64), coords[n + i].rem_euclid(2 * d as i64));
            if d % 2 == 1 {
                sign_of(l * m)
            } else if l % 2 == 0 {
                1.0 + sign_of(m)
            } else {
                0.0
            }
        })
        .product()
}

fn sign_of(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_point(system: QuditSystem, point: &PhasePoint) -> Result<()> {
    if point.n() != system.n() {
        return Err(Error::ShapeMismatch(format!("point has {} qudits, system {}", point.n(), system.n())));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftKind {
    L,
    M,
    Both,
}

/// Sign s with O at the shifted coordinates = s · O_{l,m} (single qudit).
pub fn phase_shift_rule(d: usize, l: i64, m: i64, which: ShiftKind) -> i8 {
    let e = match which {
        ShiftKind::L => m,
        ShiftKind::M => l,
        ShiftKind::Both => l + m + d as i64,
    };
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Reduce a full-domain point to Z_d^{2n}; returns the restricted coordinates and the
/// sign with O_full = sign · O_restricted.
pub fn reduce_point(d: usize, coords: &[i64]) -> (Vec<i64>, i8) {
    let n = coords.len() / 2;
    let di = d as i64;
    let mut out = vec![0i64; 2 * n];
    let mut sign = 1i8;
    for i in 0..n {
        let (lf, mf) = (coords[i].rem_euclid(2 * di), coords[n + i].rem_euclid(2 * di));
        let (l, m) = (lf % di, mf % di);
        let which = match (lf >= di, mf >= di) {
            (false, false) => None,
            (true, false) => Some(ShiftKind::L),
            (false, true) => Some(ShiftKind::M),
            (true, true) => Some(ShiftKind::Both),
        };
        if let Some(w) = which {
            sign *= phase_shift_rule(d, l, m, w);
        }
        out[i] = l;
        out[n + i] = m;
    }
    (out, sign)
}

/// Affine map u → M u + shift over Z_{2d}^{2n}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticAffineMap {
    pub n: usize,
    pub modulus: usize,
    /// Row-major 2n × 2n.
    pub matrix: Vec<i64>,
    pub shift: Vec<i64>,
}

impl SymplecticAffineMap {
    pub fn identity(n: usize, modulus: usize) -> Self {
        let k = 2 * n;
        let mut matrix = vec![0; k * k];
        for i in 0..k {
            matrix[i * k + i] = 1;
        }
        Self { n, modulus, matrix, shift: vec![0; k] }
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i * 2 * self.n + j]
    }

    pub fn apply(&self, u: &[i64]) -> Vec<i64> {
        let k = 2 * self.n;
        (0..k)
            .map(|i| {
                let s: i64 = (0..k).map(|j| self.entry(i, j) * u[j]).sum::<i64>() + self.shift[i];
                s.rem_euclid(self.modulus as i64)
            })
            .collect()
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        let k = 2 * self.n;
        let md = self.modulus as i64;
        let mut matrix = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                matrix[i * k + j] = (0..k).map(|t| self.entry(i, t) * first.entry(t, j)).sum::<i64>().rem_euclid(md);
            }
        }
        let moved: Vec<i64> = (0..k).map(|i| (0..k).map(|j| self.entry(i, j) * first.shift[j]).sum()).collect();
        let shift = moved.iter().zip(&self.shift).map(|(a, b)| (a + b).rem_euclid(md)).collect();
        Self { n: self.n, modulus: self.modulus, matrix, shift }
    }

    /// Checks MᵀΩM = Ω over Z_modulus.
    pub fn is_symplectic(&self) -> bool {
        let k = 2 * self.n;
        let md = self.modulus as i64;
        let col = |j: usize| -> Vec<i64> { (0..k).map(|i| self.entry(i, j)).collect() };
        for i in 0..k {
            for j in 0..k {
                let want = symplectic_form(&unit(k, i), &unit(k, j));
                if (symplectic_form(&col(i), &col(j)) - want).rem_euclid(md) != 0 {
                    return false;
                }
            }
        }
        true
    }
}

fn unit(k: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; k];
    v[i] = 1;
    v
}

/// Coordinate action of a generator on a register of exactly its arity.
pub fn clifford_coordinate_action(system: QuditSystem, kind: CliffordKind) -> Result<SymplecticAffineMap> {
    if system.n() != kind.arity() {
        return Err(Error::ShapeMismatch(format!("{kind:?} acts on {} qudit(s)", kind.arity())));
    }
    let targets: Vec<usize> = (0..kind.arity()).collect();
    coordinate_action_on(system, kind, &targets)
}

/// Coordinate action of a generator applied to `targets` of an n-qudit register, with
/// U O_u U† = O_{map(u)} exactly over Z_{2d}.
pub fn coordinate_action_on(system: QuditSystem, kind: CliffordKind, targets: &[usize]) -> Result<SymplecticAffineMap> {
    let (d, n) = (system.d(), system.n());
    if targets.len() != kind.arity() {
        return Err(Error::ShapeMismatch(format!("{kind:?} needs {} target(s)", kind.arity())));
    }
    crate::pauli::check_targets(n, targets)?;
    let mut map = SymplecticAffineMap::identity(n, 2 * d);
    let k = 2 * n;
    let mut set = |i: usize, j: usize, v: i64| map.matrix[i * k + j] = v;
    let q = targets[0];
    let (lq, mq) = (q, n + q);
    match kind {
        CliffordKind::Fourier => {
            set(lq, lq, 0);
            set(lq, mq, 1);
            set(mq, mq, 0);
            set(mq, lq, -1);
        }
        CliffordKind::Phase => set(mq, lq, -1),
        CliffordKind::Sum => {
            let t = targets[1];
            set(t, q, 1);
            set(mq, n + t, -1);
        }
        CliffordKind::Shift | CliffordKind::Clock => {}
    }
    let md = 2 * d as i64;
    for v in map.matrix.iter_mut() {
        *v = v.rem_euclid(md);
    }
    match kind {
        CliffordKind::Shift => map.shift[lq] = 2,
        CliffordKind::Clock => map.shift[mq] = md - 2,
        CliffordKind::Phase if d % 2 == 1 => map.shift[mq] = 1,
        _ => {}
    }
    Ok(map)
}

/// A(u) = d^{−n} Σ_v ω^{−uᵀΩv} P(v)†, built directly from the Heisenberg-Weyl sum.
pub fn phase_point_operator(system: QuditSystem, u: &[i64]) -> Result<DenseOperator> {
    let d = system.d();
    if !system.is_odd() {
        return Err(Error::EvenDimension(d));
    }
    let n = system.n();
    if u.len() != 2 * n {
        return Err(Error::ShapeMismatch(format!("point needs {} coordinates", 2 * n)));
    }
    let dim = system.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for idx in 0..d.pow(2 * n as u32) {
        let v = index_to_coords(idx, n, d);
        let p = hw_monomial(system, &v);
        let w = omega(d, -symplectic_form(u, &v));
        // P(v)† has entry conj(val(r)) at (col(r), r)
        for (r, (&col, &val)) in p.cols.iter().zip(&p.vals).enumerate() {
            acc[(col, r)] += w * val.conj();
        }
    }
    DenseOperator::new(system, acc.unscale(dim as f64))
}

/// For odd d, the per-point relation O_{l,m} = s · A(σ(l,m)) found by matching dense
/// single-qudit operators and extended across qudits. Entry i holds (σ index, s) for the
/// restricted point with lexicographic index i.
pub fn wigner_permutation(system: QuditSystem) -> Result<Vec<(usize, i8)>> {
    let d = system.d();
    if !system.is_odd() {
        return Err(Error::EvenDimension(d));
    }
    let single = system.single();
    let a_ops: Vec<CMatrix> = (0..d * d)
        .map(|i| phase_point_operator(single, &index_to_coords(i, 1, d)).map(|a| a.into_matrix()))
        .collect::<Result<_>>()?;
    let mut local = Vec::with_capacity(d * d);
    for i in 0..d * d {
        let o = o_monomial(single, &index_to_coords(i, 1, d)).to_dense();
        let hit = a_ops.iter().enumerate().find_map(|(j, a)| {
            if crate::operator::max_abs_diff(&o, a) < 1e-9 {
                Some((j, 1i8))
            } else if crate::operator::max_abs_diff(&o, &-a) < 1e-9 {
                Some((j, -1i8))
            } else {
                None
            }
        });
        local.push(hit.ok_or_else(|| Error::Internal(format!("no phase-point match for O at index {i}")))?);
    }
    let n = system.n();
    let size = d.pow(2 * n as u32);
    let mut out = Vec::with_capacity(size);
    for idx in 0..size {
        let x = index_to_coords(idx, n, d);
        let mut w = vec![0i64; 2 * n];
        let mut sign = 1i8;
        for q in 0..n {
            let (j, s) = local[coords_to_index(&[x[q], x[n + q]], d)];
            let wc = index_to_coords(j, 1, d);
            w[q] = wc[0];
            w[n + q] = wc[1];
            sign *= s;
        }
        out.push((coords_to_index(&w, d), sign));
    }
    Ok(out)
}

/// Trace of O against a dense matrix, Tr[O_u A].
pub fn o_trace_with(system: QuditSystem, coords: &[i64], a: &CMatrix) -> Complex64 {
    o_monomial(system, coords).trace_with(a)
}
