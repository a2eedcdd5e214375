//! Hecke eigenform data, Rankin-Selberg L-functions, weight-zero Eisenstein
//! series and the Petersson pairing for `Γ_0(N)`.

mod eigenform;
mod eisenstein;
mod lfunc;
mod petersson;

pub use eigenform::{
    elliptic_curve_eigenform, eigenvalues_from_primes, parse_local_sidecar, point_count_ap, Ainvs, EigenformData,
    LocalKind, LocalRecord, LocalRep, CURVE_11A,
};
pub use eisenstein::{
    cusp_zero, lattice_sum, primitive_lattice_sum, reduce_to_fundamental, validate_cusp, Component, CuspLocal,
    EisensteinEvaluator, DEFAULT_RADIUS,
};
pub use lfunc::{
    local_l_factor, partial_l, rankin_dirichlet, rankin_residue, zeta_partial, ResidueEstimate, Truncated,
    DEFAULT_DELTAS,
};
pub use petersson::{coset_reps, gamma0_index, petersson, Mat2, PeterssonConfig, QExpansion};
