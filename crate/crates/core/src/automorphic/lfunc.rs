//! Local and partial Rankin-Selberg L-functions, the unfolded Dirichlet
//! series, and the residue at `s = 1`.

use super::eigenform::{EigenformData, LocalKind, LocalRep};
use crate::specfun::{factorize, primes_up_to, zeta};
use crate::{Error, Result, C64};
use rayon::prelude::*;

/// Fixed chunk size so parallel sums reduce in a fixed order.
const CHUNK: usize = 4096;

fn p_pow(p: u64, s: C64) -> C64 {
    (-s * (p as f64).ln()).exp()
}

fn inv_checked(den: C64, s: C64) -> Result<C64> {
    if den.norm() < 1e-14 {
        return Err(Error::LocalPole(s.to_string()));
    }
    Ok(den.inv())
}

/// `L_p(s, π × π')`: the four-factor product for two unramified components,
/// `1/(1 - χχ' p^{-s-1})` for two Steinberg twists, and `1` once either
/// side has conductor exponent at least 2.
pub fn local_l_factor(pi: &LocalRep, pi2: &LocalRep, s: C64) -> Result<C64> {
    if pi.p != pi2.p {
        return Err(Error::InvalidArgument(format!("primes differ: {} vs {}", pi.p, pi2.p)));
    }
    let x = p_pow(pi.p, s);
    match (pi.kind, pi2.kind) {
        (LocalKind::Ramified, _) | (_, LocalKind::Ramified) => Ok(C64::new(1.0, 0.0)),
        (LocalKind::Unramified { alpha, alpha_inv }, LocalKind::Unramified { alpha: b, alpha_inv: b2 }) => {
            let one = C64::new(1.0, 0.0);
            let den = (one - alpha * b * x) * (one - alpha_inv * b * x) * (one - alpha * b2 * x) * (one - alpha_inv * b2 * x);
            inv_checked(den, s)
        }
        (LocalKind::Steinberg { chi }, LocalKind::Steinberg { chi: chi2 }) => {
            let den = C64::new(1.0, 0.0) - x * (chi as f64 * chi2 as f64) / pi.p as f64;
            inv_checked(den, s)
        }
        _ => Err(Error::UnsupportedLocal("unramified paired with Steinberg".into())),
    }
}

/// A truncated sum or product with a rough bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub value: C64,
    /// Estimated absolute size of the omitted tail.
    pub tail: f64,
}

fn same_level(f: &EigenformData, g: &EigenformData) -> Result<u64> {
    if f.level != g.level {
        return Err(Error::InvalidArgument(format!("levels differ: {} vs {}", f.level, g.level)));
    }
    Ok(f.level)
}

/// `L^{(N)}(s, π_f × π_g) = Π_{p ∤ N, p <= p_max} L_p`.
pub fn partial_l(f: &EigenformData, g: &EigenformData, s: C64, p_max: usize) -> Result<Truncated> {
    let level = same_level(f, g)?;
    if s.re <= 1.0 {
        return Err(Error::Convergence(s.to_string()));
    }
    if p_max < 2 {
        return Err(Error::InvalidArgument("p_max must be at least 2".into()));
    }
    let avail = f.n_max().min(g.n_max());
    if p_max > avail {
        return Err(Error::InsufficientData(format!("p_max = {p_max} exceeds the {avail} eigenvalues")));
    }
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().map(|p| p as u64).filter(|p| level % p != 0).collect();
    let logs = primes
        .par_chunks(CHUNK)
        .map(|ch| {
            ch.iter().try_fold(C64::new(0.0, 0.0), |acc, &p| {
                Ok::<_, Error>(acc + local_l_factor(&f.local(p)?, &g.local(p)?, s)?.ln())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total: C64 = logs.iter().sum();
    // log L_p ≈ a_p b_p p^{-s-1} with |a_p b_p| <= 4p
    let pm = p_max as f64;
    let sig = s.re;
    let tail_log = 4.0 * pm.powf(1.0 - sig) / ((sig - 1.0) * pm.ln());
    let value = total.exp();
    Ok(Truncated { value, tail: value.norm() * tail_log })
}

/// `ζ^{(N)}(s) = ζ(s) Π_{p | N} (1 - p^{-s})`.
pub fn zeta_partial(level: u64, s: C64) -> C64 {
    factorize(level)
        .into_iter()
        .fold(zeta(s), |acc, (p, _)| acc * (C64::new(1.0, 0.0) - p_pow(p, s)))
}

/// `Σ_{n <= n_max} a(n) b(n) n^{-(s+1)}`.
pub fn rankin_dirichlet(f: &EigenformData, g: &EigenformData, s: C64, n_max: usize) -> Result<Truncated> {
    if s.re <= 1.0 {
        return Err(Error::Convergence(s.to_string()));
    }
    let avail = f.n_max().min(g.n_max());
    if n_max > avail || n_max == 0 {
        return Err(Error::InsufficientData(format!("n_max = {n_max} but {avail} eigenvalues available")));
    }
    let (fa, ga) = (f.coefficients(), g.coefficients());
    let idx: Vec<usize> = (1..=n_max).collect();
    let parts: Vec<C64> = idx
        .par_chunks(CHUNK)
        .map(|ch| {
            ch.iter()
                .rev()
                .map(|&n| {
                    let c = fa[n] * ga[n];
                    if c == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        (-(s + 1.0) * (n as f64).ln()).exp() * c
                    }
                })
                .sum()
        })
        .collect();
    let value: C64 = parts.iter().rev().sum();
    // |a(n) b(n)| <= d(n)^2 n and Σ_{n<=x} d(n)^2 ~ x log^3 x / π^2
    let m = n_max as f64;
    let sig = s.re;
    let tail = m.ln().powi(3) / std::f64::consts::PI.powi(2) * m.powf(1.0 - sig) / (sig - 1.0);
    Ok(Truncated { value, tail })
}

/// Residue of `L^{(N)}(s, π_f × π_f)` at `s = 1` from the ladder
/// `r(δ) = δ ζ(1+δ) Π_{p|N}(1 - p^{-1-δ}) Π_{p∤N} L_p(1+δ)(1 - p^{-1-δ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueEstimate {
    /// Quadratic extrapolation of the ladder to `δ = 0`.
    pub value: f64,
    /// `(δ, r(δ))` for each rung.
    pub ladder: Vec<(f64, f64)>,
    /// Linear extrapolations from consecutive pairs of rungs.
    pub linear: Vec<f64>,
    /// Relative spread of the linear extrapolations around `value`.
    pub spread: f64,
}

pub const DEFAULT_DELTAS: [f64; 3] = [0.2, 0.1, 0.05];

pub fn rankin_residue(f: &EigenformData, p_max: usize, deltas: &[f64]) -> Result<ResidueEstimate> {
    if deltas.len() < 3 || deltas.iter().any(|&d| d <= 0.0) {
        return Err(Error::InvalidArgument("need at least three positive δ values".into()));
    }
    if p_max > f.n_max() {
        return Err(Error::InsufficientData(format!("p_max = {p_max} exceeds the {} eigenvalues", f.n_max())));
    }
    let level = f.level;
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().map(|p| p as u64).collect();
    let mut ladder = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let s = C64::new(1.0 + d, 0.0);
        let mut log_p = 0.0;
        for &p in &primes {
            let x = (1.0 - p_pow(p, s)).re;
            if level % p == 0 {
                log_p += x.ln();
            } else {
                let rep = f.local(p)?;
                log_p += (local_l_factor(&rep, &rep, s)?.re * x).ln();
            }
        }
        ladder.push((d, d * zeta(s).re * log_p.exp()));
    }
    // value at 0 of the polynomial through the last three rungs
    let n = ladder.len();
    let pts = &ladder[n - 3..];
    let value = lagrange_at_zero(pts);
    let linear: Vec<f64> = ladder.windows(2).map(lagrange_at_zero).collect();
    let spread = linear.iter().map(|l| (l - value).abs()).fold(0.0, f64::max) / value.abs();
    Ok(ResidueEstimate { value, ladder, linear, spread })
}

fn lagrange_at_zero(pts: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (j, &(xj, _)) in pts.iter().enumerate() {
            if i != j {
                w *= xj / (xj - xi);
            }
        }
        acc += w * yi;
    }
    acc
}
