//! Magic measures for qudits built on the Hermitian operator basis O_{l,m}, with exact
//! GKP lattice coefficients and two Monte Carlo simulators whose cost follows those measures.

pub mod basis;
pub mod error;
pub mod exec;
pub mod gkp;
pub mod gkpsim;
pub mod measures;
pub mod operator;
pub mod pauli;
pub mod qpsim;
pub mod random;
pub mod stabilizer;
pub mod system;

pub use error::{Error, Result};
pub use exec::Exec;
pub use num_complex::Complex64;
pub use operator::{CMatrix, DenseOperator, DensityState};
pub use system::QuditSystem;
