use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest allowed side length d^n of a dense operator unless overridden.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Register of `n` qudits with local dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditSystem {
    d: usize,
    n: usize,
}

impl QuditSystem {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        Self::with_cap(d, n, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(d: usize, n: usize, cap: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if n == 0 {
            return Err(Error::NoQudits);
        }
        let mut dim: usize = 1;
        for _ in 0..n {
            dim = match dim.checked_mul(d) {
                Some(v) if v <= cap => v,
                _ => return Err(Error::DimensionCap { d, n, cap }),
            };
        }
        Ok(Self { d, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// D = d for odd d and 2d for even d.
    pub fn modulus(&self) -> usize {
        if self.d % 2 == 1 {
            self.d
        } else {
            2 * self.d
        }
    }

    pub fn is_odd(&self) -> bool {
        self.d % 2 == 1
    }

    /// Hilbert space dimension d^n.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// The one-qudit system with the same local dimension.
    pub fn single(&self) -> Self {
        Self { d: self.d, n: 1 }
    }

    pub fn with_qudits(&self, n: usize) -> Result<Self> {
        Self::new(self.d, n)
    }

    /// Multiplicative inverse of 2 mod d (odd d only).
    pub fn inv2(&self) -> Option<usize> {
        self.is_odd().then(|| self.d.div_ceil(2))
    }
}
