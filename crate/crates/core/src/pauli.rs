use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, cis, CMatrix, DenseOperator, Monomial};
use crate::system::QuditSystem;

/// ω_d^k
pub fn omega(d: usize, k: i64) -> Complex64 {
    cis(2.0 * PI * k.rem_euclid(d as i64) as f64 / d as f64)
}

pub(crate) fn modp(x: i64, m: usize) -> usize {
    x.rem_euclid(m as i64) as usize
}

/// uᵀ Ω v with Ω = [[0, −I], [I, 0]] over integer vectors (a_1..a_n, b_1..b_n).
pub fn symplectic_form(u: &[i64], v: &[i64]) -> i64 {
    let n = u.len() / 2;
    (0..n).map(|i| -u[i] * v[n + i] + u[n + i] * v[i]).sum()
}

/// X_d: |j⟩ → |j+1 mod d⟩ on one qudit.
pub fn make_shift(system: QuditSystem) -> DenseOperator {
    let d = system.d();
    let m = CMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) });
    DenseOperator::new(system.single(), m).expect("square by construction")
}

/// Z_d = diag(ω_d^j) on one qudit.
pub fn make_clock(system: QuditSystem) -> DenseOperator {
    let d = system.d();
    let m = CMatrix::from_fn(d, d, |i, j| if i == j { omega(d, i as i64) } else { c(0.0, 0.0) });
    DenseOperator::new(system.single(), m).expect("square by construction")
}

/// Canonical Heisenberg-Weyl label ω_D^{phase} P(a, b).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliLabel {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub phase_exponent: usize,
}

impl PauliLabel {
    pub fn new(system: QuditSystem, a: &[i64], b: &[i64], phase_exponent: i64) -> Result<Self> {
        if a.len() != system.n() || b.len() != system.n() {
            return Err(Error::ShapeMismatch(format!("label length must be n = {}", system.n())));
        }
        let d = system.d();
        Ok(Self {
            a: a.iter().map(|&x| modp(x, d)).collect(),
            b: b.iter().map(|&x| modp(x, d)).collect(),
            phase_exponent: modp(phase_exponent, system.modulus()),
        })
    }

    /// Label from the concatenated coordinate vector (a_1..a_n, b_1..b_n).
    pub fn from_coords(system: QuditSystem, u: &[i64]) -> Result<Self> {
        let n = system.n();
        if u.len() != 2 * n {
            return Err(Error::ShapeMismatch(format!("coordinate vector must have length {}", 2 * n)));
        }
        Self::new(system, &u[..n], &u[n..], 0)
    }

    pub fn coords(&self) -> Vec<i64> {
        self.a.iter().chain(&self.b).map(|&x| x as i64).collect()
    }
}

/// Single-factor P(a, b) = phase · X^a Z^b as a monomial.
///
/// Odd d uses ω^{ab·2⁻¹}; even d uses e^{iπab/d} with `a`, `b` taken as given, so callers
/// passing labels in [d, 2d) get the full-domain operator.
pub(crate) fn hw_factor(d: usize, a: i64, b: i64) -> Monomial {
    let phase = if d % 2 == 1 {
        let inv2 = d.div_ceil(2) as i64;
        omega(d, (a.rem_euclid(d as i64) * b.rem_euclid(d as i64) % d as i64) * inv2)
    } else {
        cis(PI * (a * b) as f64 / d as f64)
    };
    let am = modp(a, d);
    let mut cols = Vec::with_capacity(d);
    let mut vals = Vec::with_capacity(d);
    for j in 0..d {
        let k = (j + d - am) % d;
        cols.push(k);
        vals.push(phase * omega(d, b * k as i64));
    }
    Monomial { cols, vals }
}

/// ⊗_i P(a_i, b_i) for integer coordinates u = (a, b).
pub fn hw_monomial(system: QuditSystem, u: &[i64]) -> Monomial {
    let n = system.n();
    let mut m = Monomial::identity(1);
    for i in 0..n {
        m = m.tensor(&hw_factor(system.d(), u[i], u[n + i]));
    }
    m
}

pub fn heisenberg_weyl(system: QuditSystem, label: &PauliLabel) -> Result<DenseOperator> {
    if label.a.len() != system.n() || label.b.len() != system.n() {
        return Err(Error::ShapeMismatch("label length does not match system".into()));
    }
    let m = hw_monomial(system, &label.coords());
    let phase = cis(2.0 * PI * label.phase_exponent as f64 / system.modulus() as f64);
    DenseOperator::new(system, m.to_dense() * phase)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CliffordKind {
    Fourier,
    Phase,
    Sum,
    Shift,
    Clock,
}

impl CliffordKind {
    pub const ALL: [CliffordKind; 5] =
        [CliffordKind::Fourier, CliffordKind::Phase, CliffordKind::Sum, CliffordKind::Shift, CliffordKind::Clock];

    pub fn arity(self) -> usize {
        match self {
            CliffordKind::Sum => 2,
            _ => 1,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fourier" | "f" | "h" | "r" => Some(Self::Fourier),
            "phase" | "p" | "s" => Some(Self::Phase),
            "sum" | "cnot" => Some(Self::Sum),
            "shift" | "x" => Some(Self::Shift),
            "clock" | "z" => Some(Self::Clock),
            _ => None,
        }
    }
}

/// Local matrix of a Clifford generator (d×d, or d²×d² for SUM).
pub fn clifford_matrix(d: usize, kind: CliffordKind) -> CMatrix {
    let zero = c(0.0, 0.0);
    match kind {
        CliffordKind::Fourier => {
            let s = 1.0 / (d as f64).sqrt();
            CMatrix::from_fn(d, d, |r, j| omega(d, (r * j) as i64) * s)
        }
        CliffordKind::Phase => CMatrix::from_fn(d, d, |i, j| {
            if i != j {
                return zero;
            }
            let j = j as i64;
            if d.is_multiple_of(2) {
                cis(PI * (j * j) as f64 / d as f64)
            } else {
                omega(d, ((d as i64 + 1) / 2) * (j * j - j))
            }
        }),
        CliffordKind::Sum => {
            let mut m = CMatrix::zeros(d * d, d * d);
            for i in 0..d {
                for j in 0..d {
                    m[(i * d + (i + j) % d, i * d + j)] = c(1.0, 0.0);
                }
            }
            m
        }
        CliffordKind::Shift => CMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { c(1.0, 0.0) } else { zero }),
        CliffordKind::Clock => CMatrix::from_fn(d, d, |i, j| if i == j { omega(d, i as i64) } else { zero }),
    }
}

/// Clifford generator as an operator on a system whose size matches the generator arity.
pub fn clifford_generator(system: QuditSystem, kind: CliffordKind) -> Result<DenseOperator> {
    if system.n() != kind.arity() {
        return Err(Error::ShapeMismatch(format!(
            "{kind:?} acts on {} qudit(s), system has {}",
            kind.arity(),
            system.n()
        )));
    }
    DenseOperator::unitary(system, clifford_matrix(system.d(), kind))
}

/// Qubit-style T gate diag(1, e^{iπ/4}, 1, …, 1); non-Clifford for every d.
pub fn t_gate(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| match (i, j) {
        (1, 1) => cis(PI / 4.0),
        (i, j) if i == j => c(1.0, 0.0),
        _ => c(0.0, 0.0),
    })
}

/// Place a k-qudit gate on `targets` of an n-qudit register (qudit 0 most significant).
pub fn embed(system: QuditSystem, local: &CMatrix, targets: &[usize]) -> Result<CMatrix> {
    let (d, n) = (system.d(), system.n());
    let k = targets.len();
    let dk = d.pow(k as u32);
    if local.nrows() != dk || local.ncols() != dk {
        return Err(Error::ShapeMismatch(format!("gate of size {} on {k} targets", local.nrows())));
    }
    check_targets(n, targets)?;
    let dim = system.dim();
    let stride = |q: usize| d.pow((n - 1 - q) as u32);
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut in_loc = 0;
        let mut base = col;
        for &q in targets {
            let digit = (col / stride(q)) % d;
            in_loc = in_loc * d + digit;
            base -= digit * stride(q);
        }
        for out_loc in 0..dk {
            let v = local[(out_loc, in_loc)];
            if v == c(0.0, 0.0) {
                continue;
            }
            let mut row = base;
            let mut rest = out_loc;
            for &q in targets.iter().rev() {
                row += (rest % d) * stride(q);
                rest /= d;
            }
            out[(row, col)] = v;
        }
    }
    Ok(out)
}

pub(crate) fn check_targets(n: usize, targets: &[usize]) -> Result<()> {
    for (i, &q) in targets.iter().enumerate() {
        if q >= n {
            return Err(Error::InvalidArgument(format!("target {q} out of range for {n} qudits")));
        }
        if targets[..i].contains(&q) {
            return Err(Error::InvalidArgument(format!("repeated target {q}")));
        }
    }
    Ok(())
}

/// A generator applied to specific qudits of a register.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordOp {
    pub kind: CliffordKind,
    pub targets: Vec<usize>,
}

impl CliffordOp {
    pub fn new(kind: CliffordKind, targets: Vec<usize>) -> Self {
        Self { kind, targets }
    }

    pub fn unitary(&self, system: QuditSystem) -> Result<DenseOperator> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::ShapeMismatch(format!("{:?} needs {} target(s)", self.kind, self.kind.arity())));
        }
        DenseOperator::new(system, embed(system, &clifford_matrix(system.d(), self.kind), &self.targets)?)
    }
}

/// Product U_k ⋯ U_1 of a word applied left to right.
pub fn word_unitary(system: QuditSystem, word: &[CliffordOp]) -> Result<DenseOperator> {
    let mut u = DenseOperator::identity(system);
    for op in word {
        u = op.unitary(system)?.mul(&u)?;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::max_abs_diff;

    fn sys(d: usize, n: usize) -> QuditSystem {
        QuditSystem::new(d, n).unwrap()
    }

    fn pw(m: &CMatrix, k: usize) -> CMatrix {
        let mut out = CMatrix::identity(m.nrows(), m.ncols());
        for _ in 0..k {
            out = &out * m;
        }
        out
    }

    #[test]
    fn shift_and_clock_small_cases() {
        let x2 = make_shift(sys(2, 1));
        let expect = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(x2.matrix(), &expect);
        let x3 = make_shift(sys(3, 1));
        for j in 0..3 {
            assert_eq!(x3.matrix()[((j + 1) % 3, j)], c(1.0, 0.0));
        }
        let z2 = make_clock(sys(2, 1));
        assert!((z2.matrix()[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        let z3 = make_clock(sys(3, 1));
        assert!((z3.matrix()[(2, 2)] - cis(4.0 * PI / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn clock_shift_relations() {
        for d in 2..=7 {
            let s = sys(d, 1);
            let (x, z) = (make_shift(s).into_matrix(), make_clock(s).into_matrix());
            let id = CMatrix::identity(d, d);
            assert!(max_abs_diff(&pw(&x, d), &id) < 1e-12);
            assert!(max_abs_diff(&pw(&z, d), &id) < 1e-12);
            assert!(max_abs_diff(&(&z * &x), &((&x * &z) * omega(d, 1))) < 1e-12);
        }
    }

    #[test]
    fn qubit_y_and_identity() {
        let s = sys(2, 1);
        let y = heisenberg_weyl(s, &PauliLabel::new(s, &[1], &[1], 0).unwrap()).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!(max_abs_diff(y.matrix(), &expect) < 1e-15);
        assert!(max_abs_diff(&pw(y.matrix(), 2), &CMatrix::identity(2, 2)) < 1e-15);
        let id = heisenberg_weyl(s, &PauliLabel::new(s, &[0], &[0], 0).unwrap()).unwrap();
        assert!(id.approx_eq(&DenseOperator::identity(s), 0.0));
    }

    #[test]
    fn hw_orthogonality_d3() {
        let s = sys(3, 1);
        let ops: Vec<CMatrix> = (0..9).map(|i| hw_monomial(s, &[i / 3, i % 3]).to_dense()).collect();
        for (i, p) in ops.iter().enumerate() {
            for (j, q) in ops.iter().enumerate() {
                let t = crate::operator::trace_inner(q, p);
                let expect = if i == j { 3.0 } else { 0.0 };
                assert!((t - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hw_order_divides_d() {
        for d in 2..=7 {
            for a in 0..d as i64 {
                for b in 0..d as i64 {
                    let p = hw_factor(d, a, b).to_dense();
                    assert!(max_abs_diff(&pw(&p, d), &CMatrix::identity(d, d)) < 1e-10, "d={d} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn hw_commutation() {
        for d in 2..=5 {
            let di = d as i64;
            for u in 0..d * d {
                for v in 0..d * d {
                    let uu = [(u / d) as i64, (u % d) as i64];
                    let vv = [(v / d) as i64, (v % d) as i64];
                    let p = hw_factor(d, uu[0], uu[1]).to_dense();
                    let q = hw_factor(d, vv[0], vv[1]).to_dense();
                    let k = symplectic_form(&uu, &vv).rem_euclid(di);
                    let lhs = &p * &q;
                    let rhs = (&q * &p) * omega(d, k);
                    assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "d={d} u={uu:?} v={vv:?}");
                }
            }
        }
    }

    #[test]
    fn qubit_generators() {
        let s = sys(2, 1);
        let h = clifford_generator(s, CliffordKind::Fourier).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let expect = CMatrix::from_row_slice(2, 2, &[c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]);
        assert!(max_abs_diff(h.matrix(), &expect) < 1e-15);
        let p = clifford_generator(s, CliffordKind::Phase).unwrap();
        assert!((p.matrix()[(1, 1)] - c(0.0, 1.0)).norm() < 1e-15);
        let cnot = clifford_generator(sys(2, 2), CliffordKind::Sum).unwrap();
        assert_eq!(cnot.matrix()[(3, 2)], c(1.0, 0.0));
        assert_eq!(cnot.matrix()[(2, 3)], c(1.0, 0.0));
        assert_eq!(cnot.matrix()[(0, 0)], c(1.0, 0.0));
        assert!(clifford_generator(s, CliffordKind::Sum).is_err());
        let z = make_clock(s);
        assert!(h.conjugate(&z).unwrap().approx_eq(&make_shift(s), 1e-12));
    }

    #[test]
    fn odd_phase_gate_entries() {
        // diagonal ω^{2⁻¹ j(j−1)}: for d=3, 2⁻¹ = 2 so exponents 0, 0, 2·2 = 4 ≡ 1
        let p = clifford_matrix(3, CliffordKind::Phase);
        assert!((p[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p[(2, 2)] - omega(3, 1)).norm() < 1e-15);
    }

    #[test]
    fn fourier_fourth_power() {
        for d in 2..=7 {
            let r = clifford_matrix(d, CliffordKind::Fourier);
            assert!(max_abs_diff(&pw(&r, 4), &CMatrix::identity(d, d)) < 1e-10);
        }
    }

    #[test]
    fn generators_are_unitary_and_normalise_paulis() {
        for d in 2..=5 {
            for kind in CliffordKind::ALL {
                let s = sys(d, kind.arity());
                let u = clifford_generator(s, kind).unwrap();
                assert!(u.unitarity_deviation() < 1e-10);
                let labels = d.pow(2 * s.n() as u32);
                for idx in 0..labels {
                    let coords: Vec<i64> = (0..2 * s.n()).map(|k| ((idx / d.pow(k as u32)) % d) as i64).collect();
                    let p = hw_monomial(s, &coords);
                    let conj = p.conjugated_by(u.matrix());
                    // project onto the Pauli basis: exactly one coefficient of unit modulus
                    let mut hits = 0;
                    for jdx in 0..labels {
                        let v: Vec<i64> = (0..2 * s.n()).map(|k| ((jdx / d.pow(k as u32)) % d) as i64).collect();
                        let coef = hw_monomial(s, &v).trace_with_adjoint(&conj) / s.dim() as f64;
                        if coef.norm() > 1e-9 {
                            assert!((coef.norm() - 1.0).abs() < 1e-10);
                            hits += 1;
                        }
                    }
                    assert_eq!(hits, 1, "d={d} {kind:?} label {coords:?}");
                }
            }
        }
    }

    #[test]
    fn embed_matches_kron() {
        let s = sys(3, 3);
        let g = clifford_matrix(3, CliffordKind::Fourier);
        let id = CMatrix::identity(3, 3);
        let full = embed(s, &g, &[1]).unwrap();
        assert!(max_abs_diff(&full, &id.kronecker(&g).kronecker(&id)) < 1e-15);
        let sum = clifford_matrix(3, CliffordKind::Sum);
        let full = embed(s, &sum, &[0, 1]).unwrap();
        assert!(max_abs_diff(&full, &sum.kronecker(&id)) < 1e-15);
        // reversed targets: control on qudit 1, target qudit 0
        let rev = embed(sys(3, 2), &sum, &[1, 0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                // |j⟩_0 |i⟩_1 → |i+j⟩_0 |i⟩_1
                assert_eq!(rev[(((i + j) % 3) * 3 + i, j * 3 + i)], c(1.0, 0.0));
            }
        }
        assert!(embed(s, &g, &[3]).is_err());
        assert!(embed(s, &sum, &[1, 1]).is_err());
    }
}
