//! Local zeta integrals at primes dividing the level and their assembly
//! into `I_N` and the global zeta integral at a cusp near 0.

use crate::automorphic::{
    gamma0_index, partial_l, validate_cusp, Component, CuspLocal, EigenformData, LocalKind, LocalRep,
};
use crate::{Error, Result, C64};

fn p_pow(p: u64, s: C64) -> C64 {
    (-s * (p as f64).ln()).exp()
}

fn check_pair(pi: &LocalRep, pi2: &LocalRep) -> Result<()> {
    if pi.p != pi2.p {
        return Err(Error::InvalidArgument(format!("primes differ: {} vs {}", pi.p, pi2.p)));
    }
    if pi.r == 0 || pi2.r == 0 {
        return Err(Error::UnsupportedLocal(format!("unramified component at p = {}", pi.p)));
    }
    if pi.r != pi2.r {
        return Err(Error::InvalidArgument(format!("conductor exponents differ at p = {}", pi.p)));
    }
    Ok(())
}

/// `I(s, ∞_p) / vol(K_p)`: 1 when `r > 1`, `1/(1 - χχ' p^{-s-1})` for a
/// pair of twisted Steinberg components.
pub fn zeta_local_infinity(pi: &LocalRep, pi2: &LocalRep, s: C64) -> Result<C64> {
    check_pair(pi, pi2)?;
    if pi.r > 1 {
        return Ok(C64::new(1.0, 0.0));
    }
    match (pi.kind, pi2.kind) {
        (LocalKind::Steinberg { chi }, LocalKind::Steinberg { chi: chi2 }) => {
            let den = C64::new(1.0, 0.0) - p_pow(pi.p, s + 1.0) * (chi as f64 * chi2 as f64);
            if den.norm() < 1e-14 {
                return Err(Error::LocalPole(s.to_string()));
            }
            Ok(den.inv())
        }
        _ => Err(Error::UnsupportedLocal(format!("non-Steinberg component at p = {} with r = 1", pi.p))),
    }
}

/// `d/ds log I(s, ∞_p)`.
fn log_derivative_infinity(pi: &LocalRep, pi2: &LocalRep, s: C64) -> Result<C64> {
    check_pair(pi, pi2)?;
    if pi.r > 1 {
        return Ok(C64::new(0.0, 0.0));
    }
    match (pi.kind, pi2.kind) {
        (LocalKind::Steinberg { chi }, LocalKind::Steinberg { chi: chi2 }) => {
            let x = p_pow(pi.p, s + 1.0) * (chi as f64 * chi2 as f64);
            Ok(-x * (pi.p as f64).ln() / (1.0 - x))
        }
        _ => Err(Error::UnsupportedLocal(format!("non-Steinberg component at p = {} with r = 1", pi.p))),
    }
}

fn epsilon_product(pi: &LocalRep, pi2: &LocalRep) -> Result<f64> {
    let e1 = pi.epsilon.ok_or(Error::MissingEpsilon(pi.p))?;
    let e2 = pi2.epsilon.ok_or(Error::MissingEpsilon(pi2.p))?;
    Ok(e1 as f64 * e2 as f64)
}

/// `I(s, 0_p) / vol(K_p) = ε(1/2, π) ε(1/2, π') p^{r(s-1)} I(s, ∞_p) / vol(K_p)`.
pub fn zeta_local_zero(pi: &LocalRep, pi2: &LocalRep, s: C64) -> Result<C64> {
    let inf = zeta_local_infinity(pi, pi2, s)?;
    let eps = epsilon_product(pi, pi2)?;
    Ok(inf * eps * p_pow(pi.p, -(s - 1.0) * pi.r as f64))
}

/// Number of `K_p`-cosets in `0_p`.
pub fn zero_coset_count(p: u64, r: u32) -> u64 {
    p.pow(r)
}

pub fn zeta_local(pi: &LocalRep, pi2: &LocalRep, component: Component, s: C64) -> Result<C64> {
    match component {
        Component::Infinity => zeta_local_infinity(pi, pi2, s),
        Component::Zero => zeta_local_zero(pi, pi2, s),
    }
}

fn same_level(f: &EigenformData, g: &EigenformData, cusp: &[CuspLocal]) -> Result<u64> {
    if f.level != g.level {
        return Err(Error::InvalidArgument(format!("levels differ: {} vs {}", f.level, g.level)));
    }
    validate_cusp(f.level, cusp)?;
    Ok(f.level)
}

/// `I_N(s; f, g; c) = Π_p I(s, ∞_p) - Π_p I(s, c_p)` with the local
/// volumes multiplied out, together with its derivative in `s`.
pub fn i_n_with_derivative(f: &EigenformData, g: &EigenformData, cusp: &[CuspLocal], s: C64) -> Result<(C64, C64)> {
    let level = same_level(f, g, cusp)?;
    let vol = 1.0 / gamma0_index(level);
    let one = C64::new(1.0, 0.0);
    let (mut p_inf, mut d_inf) = (one, C64::new(0.0, 0.0));
    let (mut p_c, mut d_c) = (one, C64::new(0.0, 0.0));
    for c in cusp {
        let (pi, pi2) = (f.local(c.p)?, g.local(c.p)?);
        let inf = zeta_local_infinity(&pi, &pi2, s)?;
        let dl = log_derivative_infinity(&pi, &pi2, s)?;
        p_inf *= inf;
        d_inf += dl;
        match c.component {
            Component::Infinity => {
                p_c *= inf;
                d_c += dl;
            }
            Component::Zero => {
                p_c *= zeta_local_zero(&pi, &pi2, s)?;
                d_c += dl + c.r as f64 * (c.p as f64).ln();
            }
        }
    }
    let value = (p_inf - p_c) * vol;
    let deriv = (p_inf * d_inf - p_c * d_c) * vol;
    Ok((value, deriv))
}

pub fn i_n(f: &EigenformData, g: &EigenformData, cusp: &[CuspLocal], s: C64) -> Result<C64> {
    Ok(i_n_with_derivative(f, g, cusp, s)?.0)
}

/// `1 - Π_{p: c_p = 0_p} ε_p ε'_p |N|_p^{1-s}`.
pub fn near_zero_bracket(f: &EigenformData, g: &EigenformData, cusp: &[CuspLocal], s: C64) -> Result<C64> {
    same_level(f, g, cusp)?;
    let mut prod = C64::new(1.0, 0.0);
    for c in cusp.iter().filter(|c| c.component == Component::Zero) {
        let eps = epsilon_product(&f.local(c.p)?, &g.local(c.p)?)?;
        // |N|_p^{1-s} = p^{-r(1-s)}
        prod *= p_pow(c.p, -(s - 1.0) * c.r as f64) * eps;
    }
    Ok(C64::new(1.0, 0.0) - prod)
}

/// Source of the complete `L(s, π_f × π_g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LValue {
    /// Truncated Euler product over `p ∤ N`, times the local factors at `p | N`.
    Euler { p_max: usize },
    /// A supplied value of the complete L-function.
    Given(C64),
}

/// Complete `L(s) = L^{(N)}(s) Π_{p | N} I(s, ∞_p) vol(K_p)^{-1}`.
pub fn complete_l(f: &EigenformData, g: &EigenformData, s: C64, p_max: usize) -> Result<C64> {
    let mut l = partial_l(f, g, s, p_max)?.value;
    for rep in f.bad_locals() {
        l *= zeta_local_infinity(rep, &g.local(rep.p)?, s)?;
    }
    Ok(l)
}

/// `L(s, π_f × π_g) |G(Ẑ):K_0(N)|^{-1} (1 - Π_{0_p} ε_p ε'_p |N|_p^{1-s})`.
///
/// At the cusp `∞` (every component `∞_p`) the bracket is empty and the
/// value is 0.
pub fn zeta_global(f: &EigenformData, g: &EigenformData, cusp: &[CuspLocal], s: C64, l: LValue) -> Result<C64> {
    let bracket = near_zero_bracket(f, g, cusp, s)?;
    let l = match l {
        LValue::Given(v) => v,
        LValue::Euler { p_max } => complete_l(f, g, s, p_max)?,
    };
    Ok(l * bracket / gamma0_index(f.level))
}
