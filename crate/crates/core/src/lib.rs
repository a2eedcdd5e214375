//! Truncated Chen series, their infinite-Frobenius conjugates, generalized
//! Bloch-Wigner coordinates, and the automorphic inputs for regulator
//! vectors of modular curves.

pub mod automorphic;
pub mod error;
pub mod iterint;
pub mod ncalg;
pub mod regulator;
pub mod singleval;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
