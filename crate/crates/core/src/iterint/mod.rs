//! Iterated integrals of rational one-forms, Chen transport series and their
//! regularization at tangential base points.
//!
//! Ordering convention: in `∫_γ ω1 ⋯ ωn` the form `ω1` sits at the largest
//! time, so the transport solves `S' = A(t) S` and concatenation reads
//! `T(γδ) = T(γ) T(δ)` where `γδ` runs through `δ` first.

mod form;
mod path;
mod solver;
mod transport;

pub use form::{Connection, OneForm};
pub use path::{Path, Segment, Tangential};
pub use solver::SolverConfig;
pub use transport::{
    iterated_integral, iterated_integral_with, regularized_transport, regularized_transport_with,
    residue_series, transport, transport_with, RegBackend, RegConfig, TransportConfig,
};
