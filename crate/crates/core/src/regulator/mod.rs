//! Local zeta integrals at bad primes, matrix coefficients of the infinite
//! Frobenius on length-two tensors, and regulator vectors for `Y_0(N)`.

mod assemble;
mod coeffs;
mod local;

pub use crate::automorphic::{Component, CuspLocal};
pub use assemble::{
    label_fcd, label_fgc, prime_level_display, reg2_assemble, reg3_assemble, DiagInput, PairInput,
    PrimeLevelInput, Reg2Input, Reg3Input, RegulatorVector,
};
pub use coeffs::{
    conj_label, matrix_coeff_second_case, matrix_coeff_third_case, BaseMode, InnerProductTable, MatrixCoefficient,
};
pub use local::{
    complete_l, i_n, i_n_with_derivative, near_zero_bracket, zero_coset_count, zeta_global, zeta_local,
    zeta_local_infinity, zeta_local_zero, LValue,
};

use crate::automorphic::{cusp_zero, zeta_partial, EigenformData};
use crate::{Error, Result, C64};
use std::collections::BTreeMap;

/// `|G(Ẑ) : K_0(N)| = N Π_{p|N}(1 + 1/p)`.
pub fn k0_index(level: u64) -> f64 {
    crate::automorphic::gamma0_index(level)
}

/// Outcome of the single-form run at a prime level.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeLevelRun {
    pub reg2: RegulatorVector,
    pub reg3: RegulatorVector,
    /// The prime-level display for comparison with `reg2`.
    pub display: RegulatorVector,
    pub i_n: C64,
    pub i_n_derivative: C64,
}

/// `reg_2` and `reg_3` for a single newform `f` of prime level with the cusp
/// `0`, from its Petersson norm `(ω_f, ω_f)` and `Res_{s=1} L^{(N)}(s, f × f)`.
pub fn prime_level_run(
    f: &EigenformData,
    norm: f64,
    residue: f64,
    mode: BaseMode,
    eisenstein_at_base: Option<C64>,
) -> Result<PrimeLevelRun> {
    let p = f.level;
    let fac = crate::specfun::factorize(p);
    if fac.len() != 1 || fac[0].1 != 1 {
        return Err(Error::InvalidArgument(format!("level {p} is not prime")));
    }
    let cusp = cusp_zero(p);
    let one = C64::new(1.0, 0.0);
    let (i_n, i_n_derivative) = i_n_with_derivative(f, f, &cusp, one)?;
    let zeta_n2 = zeta_partial(p, C64::new(2.0, 0.0)).re;
    let label = "f".to_string();
    let c0 = "0".to_string();
    let mut e_base = BTreeMap::new();
    if let Some(e) = eisenstein_at_base {
        e_base.insert(c0.clone(), e);
    }
    let reg2 = reg2_assemble(&Reg2Input {
        level: p,
        zeta_n2,
        norms: BTreeMap::from([(label.clone(), norm)]),
        cusps: vec![c0.clone()],
        pairs: vec![],
        diagonal: vec![DiagInput { f: label.clone(), cusp: c0.clone(), residue: Some(residue), i_n, i_n_derivative }],
        mode,
        eisenstein_at_base: e_base,
    })?;
    let reg3 = reg3_assemble(
        &Reg3Input {
            level: p,
            zeta_n2,
            norms: BTreeMap::from([(label.clone(), norm)]),
            cusps: vec![c0],
            i_n_eisenstein: BTreeMap::new(),
            l_products: BTreeMap::new(),
        },
        mode,
    )?;
    let local = zeta_local_infinity(&f.local(p)?, &f.local(p)?, one)?;
    let display = prime_level_display(&PrimeLevelInput {
        p,
        zeta_p2: zeta_n2,
        petersson: BTreeMap::from([(label.clone(), norm / (4.0 * std::f64::consts::PI))]),
        pairs: vec![],
        residues: BTreeMap::from([(label, residue * local.re)]),
        mode,
        eisenstein_at_base,
    })?;
    Ok(PrimeLevelRun { reg2, reg3, display, i_n, i_n_derivative })
}
