use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::system::QuditSystem;

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance used when validating unitarity, Hermiticity and states.
pub const VALIDATION_TOL: f64 = 1e-9;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// e^{iθ}
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Dense operator on a qudit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    system: QuditSystem,
    matrix: CMatrix,
}

impl DenseOperator {
    pub fn new(system: QuditSystem, matrix: CMatrix) -> Result<Self> {
        let dim = system.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "expected {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { system, matrix })
    }

    /// Like [`DenseOperator::new`] but also checks unitarity to 1e-9.
    pub fn unitary(system: QuditSystem, matrix: CMatrix) -> Result<Self> {
        let op = Self::new(system, matrix)?;
        let dev = op.unitarity_deviation();
        if dev > VALIDATION_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(op)
    }

    pub fn identity(system: QuditSystem) -> Self {
        let dim = system.dim();
        Self { system, matrix: CMatrix::identity(dim, dim) }
    }

    pub fn system(&self) -> QuditSystem {
        self.system
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.system.d() != other.system.d() {
            return Err(Error::ShapeMismatch("tensor of different local dimensions".into()));
        }
        let system = QuditSystem::new(self.system.d(), self.system.n() + other.system.n())?;
        Ok(Self { system, matrix: self.matrix.kronecker(&other.matrix) })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { system: self.system, matrix: &self.matrix * &other.matrix })
    }

    pub fn adjoint(&self) -> Self {
        Self { system: self.system, matrix: self.matrix.adjoint() }
    }

    /// Tr[A† B]
    pub fn trace_inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(trace_inner(&self.matrix, &other.matrix))
    }

    /// U A U† with `self` as U.
    pub fn conjugate(&self, a: &Self) -> Result<Self> {
        self.check_same(a)?;
        Ok(Self { system: self.system, matrix: &self.matrix * &a.matrix * self.matrix.adjoint() })
    }

    pub fn pow(&self, k: usize) -> Self {
        let dim = self.system.dim();
        let mut out = CMatrix::identity(dim, dim);
        for _ in 0..k {
            out = &out * &self.matrix;
        }
        Self { system: self.system, matrix: out }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// max |U U† − I|
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.system.dim();
        max_abs_diff(&(&self.matrix * self.matrix.adjoint()), &CMatrix::identity(dim, dim))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.system == other.system && max_abs_diff(&self.matrix, &other.matrix) <= tol
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.system != other.system {
            return Err(Error::ShapeMismatch(format!(
                "systems (d={}, n={}) and (d={}, n={})",
                self.system.d(),
                self.system.n(),
                other.system.d(),
                other.system.n()
            )));
        }
        Ok(())
    }
}

pub fn conjugate_by(u: &DenseOperator, a: &DenseOperator) -> Result<DenseOperator> {
    u.conjugate(a)
}

/// Tr[A† B] without forming the product.
pub fn trace_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Operator with exactly one nonzero entry per row: row r holds `vals[r]` at column `cols[r]`.
///
/// Every O_{l,m}, Heisenberg-Weyl operator and their tensor products has this shape, so
/// traces against dense matrices cost O(d^n) instead of O(d^{2n}).
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub cols: Vec<usize>,
    pub vals: Vec<Complex64>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Self { cols: (0..dim).collect(), vals: vec![c(1.0, 0.0); dim] }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim(), other.dim());
        let mut cols = Vec::with_capacity(da * db);
        let mut vals = Vec::with_capacity(da * db);
        for r in 0..da {
            for s in 0..db {
                cols.push(self.cols[r] * db + other.cols[s]);
                vals.push(self.vals[r] * other.vals[s]);
            }
        }
        Self { cols, vals }
    }

    pub fn to_dense(&self) -> CMatrix {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (r, (&col, &v)) in self.cols.iter().zip(&self.vals).enumerate() {
            m[(r, col)] = v;
        }
        m
    }

    /// Tr[M A]
    pub fn trace_with(&self, a: &CMatrix) -> Complex64 {
        self.cols.iter().zip(&self.vals).enumerate().map(|(r, (&col, &v))| v * a[(col, r)]).sum()
    }

    /// Tr[A M†] = Σ_r A[r, col(r)] conj(val(r))
    pub fn trace_with_adjoint(&self, a: &CMatrix) -> Complex64 {
        self.cols.iter().zip(&self.vals).enumerate().map(|(r, (&col, &v))| a[(r, col)] * v.conj()).sum()
    }

    /// U M U†
    pub fn conjugated_by(&self, u: &CMatrix) -> CMatrix {
        let dim = self.dim();
        // U M: column col(r) of the product gets U[:, r] * val(r)
        let mut um = CMatrix::zeros(dim, dim);
        for (r, (&col, &v)) in self.cols.iter().zip(&self.vals).enumerate() {
            for i in 0..dim {
                um[(i, col)] += u[(i, r)] * v;
            }
        }
        um * u.adjoint()
    }

    pub fn trace(&self) -> Complex64 {
        self.cols.iter().zip(&self.vals).enumerate().filter(|(r, (&col, _))| *r == col).map(|(_, (_, &v))| v).sum()
    }
}

/// Validated density matrix: Hermitian, unit trace and positive semidefinite to 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    system: QuditSystem,
    matrix: CMatrix,
}

impl DensityState {
    pub fn new(system: QuditSystem, matrix: CMatrix) -> Result<Self> {
        let op = DenseOperator::new(system, matrix)?;
        let herm = op.hermiticity_deviation();
        if herm > VALIDATION_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = op.trace();
        if (tr - c(1.0, 0.0)).norm() > VALIDATION_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let matrix = op.into_matrix();
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let min_eig = sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -VALIDATION_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { system, matrix })
    }

    /// Pure state from an unnormalised ket.
    pub fn from_ket(system: QuditSystem, amps: &[Complex64]) -> Result<Self> {
        if amps.len() != system.dim() {
            return Err(Error::ShapeMismatch(format!(
                "ket of length {} for dimension {}",
                amps.len(),
                system.dim()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let psi: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
        let dim = psi.len();
        let matrix = CMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
        Ok(Self { system, matrix })
    }

    pub fn basis(system: QuditSystem, index: usize) -> Result<Self> {
        let mut amps = vec![c(0.0, 0.0); system.dim()];
        *amps
            .get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("basis index {index} out of range")))? = c(1.0, 0.0);
        Self::from_ket(system, &amps)
    }

    pub fn maximally_mixed(system: QuditSystem) -> Self {
        let dim = system.dim();
        Self { system, matrix: CMatrix::identity(dim, dim).unscale(dim as f64) }
    }

    pub fn system(&self) -> QuditSystem {
        self.system
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.system.d() != other.system.d() {
            return Err(Error::ShapeMismatch("tensor of different local dimensions".into()));
        }
        let system = QuditSystem::new(self.system.d(), self.system.n() + other.system.n())?;
        Ok(Self { system, matrix: self.matrix.kronecker(&other.matrix) })
    }

    /// U ρ U†
    pub fn evolve(&self, u: &DenseOperator) -> Result<Self> {
        if u.system() != self.system {
            return Err(Error::ShapeMismatch("unitary acts on a different system".into()));
        }
        Ok(Self { system: self.system, matrix: u.matrix() * &self.matrix * u.matrix().adjoint() })
    }

    pub fn purity(&self) -> f64 {
        trace_inner(&self.matrix, &self.matrix).re
    }

    /// Tr[ρ σ]; the fidelity when either state is pure.
    pub fn overlap(&self, other: &Self) -> f64 {
        trace_inner(&self.matrix, &other.matrix).re
    }

    /// Re Tr[Π ρ]
    pub fn expectation(&self, effect: &CMatrix) -> f64 {
        trace_inner(effect, &self.matrix).re
    }
}
