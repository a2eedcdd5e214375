//! Weight-zero Eisenstein series `𝓔_c(τ, s)` of level `Γ_0(N)` attached to a
//! cusp `c` near 0.
//!
//! The coset sum runs over coprime bottom rows `(c, d)` of determinant-one
//! matrices. Writing `A_M(τ) = Σ_{gcd(c,d)=1, M|c} y^s / |cτ + d|^{2s}` (both
//! signs of `(c, d)`), the weight `φ_c` expands by inclusion-exclusion over the
//! primes where `c` has component `0_p`:
//!
//! `𝓔_c = -2π [A_N - w^{-1} Σ_S (-1)^{|S|} A_{M_S}]`,
//!
//! with `w = Π_{0_p} p^r` and `M_S = Π_{∞_p} p^r · Π_{p ∈ S} p`. Each `A_M` is
//! recovered from the full lattice sums `M^{-s} G(Mτ, s)` by divisor
//! inversion, and `G` is evaluated after reducing its argument to the
//! standard fundamental domain of `SL_2(ℤ)`.

use crate::specfun::{factorize, zeta};
use crate::{Error, Result, C64};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Local component of a cusp at `p | N`: the class `∞_p` or `0_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Component {
    Infinity,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuspLocal {
    pub p: u64,
    /// `v_p(N)`.
    pub r: u32,
    pub component: Component,
}

impl CuspLocal {
    pub fn new(p: u64, r: u32, component: Component) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument(format!("cusp component at {p} needs r >= 1")));
        }
        Ok(CuspLocal { p, r, component })
    }
}

/// Checks that `cusp` has exactly one component at every `p | N`, with the
/// right exponent.
pub fn validate_cusp(level: u64, cusp: &[CuspLocal]) -> Result<()> {
    let want = factorize(level);
    if want.len() != cusp.len() {
        return Err(Error::CuspNotNearZero(format!(
            "{} local components given for a level with {} prime factors",
            cusp.len(),
            want.len()
        )));
    }
    for (p, r) in want {
        match cusp.iter().find(|c| c.p == p) {
            Some(c) if c.r == r => {}
            Some(c) => {
                return Err(Error::CuspNotNearZero(format!("exponent at {p} is {}, expected {r}", c.r)));
            }
            None => return Err(Error::CuspNotNearZero(format!("no component at {p}"))),
        }
    }
    Ok(())
}

/// The cusp with component `0_p` at every `p | N`.
pub fn cusp_zero(level: u64) -> Vec<CuspLocal> {
    factorize(level)
        .into_iter()
        .map(|(p, r)| CuspLocal { p, r, component: Component::Zero })
        .collect()
}

pub const DEFAULT_RADIUS: f64 = 200.0;

#[derive(Debug, Clone)]
pub struct EisensteinEvaluator {
    pub level: u64,
    pub cusp: Vec<CuspLocal>,
    /// Lattice sums include `|mτ + n| <= radius` after reduction.
    pub radius: f64,
    /// `(M, coefficient)` pairs: `𝓔_c = -2π Σ coefficient · A_M`.
    terms: Vec<(u64, f64)>,
}

impl EisensteinEvaluator {
    pub fn new(level: u64, cusp: Vec<CuspLocal>) -> Result<Self> {
        Self::with_radius(level, cusp, DEFAULT_RADIUS)
    }

    pub fn with_radius(level: u64, cusp: Vec<CuspLocal>, radius: f64) -> Result<Self> {
        validate_cusp(level, &cusp)?;
        if !(radius >= 10.0) {
            return Err(Error::InvalidArgument(format!("radius {radius} below 10")));
        }
        let mut base = 1u64;
        let mut zeros = Vec::new();
        for c in &cusp {
            match c.component {
                Component::Infinity => base *= c.p.pow(c.r),
                Component::Zero => zeros.push((c.p, c.r)),
            }
        }
        let w: u64 = zeros.iter().map(|(p, r)| p.pow(*r)).product();
        let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
        *acc.entry(level).or_default() += 1.0;
        for mask in 0u32..(1 << zeros.len()) {
            let mut m = base;
            for (i, (p, _)) in zeros.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    m *= p;
                }
            }
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *acc.entry(m).or_default() -= sign / w as f64;
        }
        let terms = acc.into_iter().filter(|(_, v)| *v != 0.0).collect();
        Ok(EisensteinEvaluator { level, cusp, radius, terms })
    }

    /// `𝓔_c(τ, s)`; requires `Re s >= 1.5` and `Im τ > 0`.
    pub fn eval(&self, tau: C64, s: C64) -> Result<C64> {
        if s.re < 1.5 {
            return Err(Error::Convergence(s.to_string()));
        }
        if !(tau.im > 0.0) {
            return Err(Error::InvalidArgument(format!("τ = {tau} not in the upper half-plane")));
        }
        let mut cache = BTreeMap::new();
        let mut total = C64::new(0.0, 0.0);
        for &(m, coef) in &self.terms {
            total += primitive_sum(m, tau, s, self.radius, &mut cache) * coef;
        }
        Ok(total * (-2.0 * PI))
    }
}

/// Reduces `τ` to the standard fundamental domain of `SL_2(ℤ)`.
pub fn reduce_to_fundamental(mut tau: C64) -> C64 {
    for _ in 0..10_000 {
        tau.re -= tau.re.round();
        let n = tau.norm_sqr();
        if n < 1.0 - 1e-15 {
            tau = -tau.inv();
        } else {
            break;
        }
    }
    tau
}

/// `G(τ, s) = Σ_{(m,n) ≠ 0} y^s / |mτ + n|^{2s}`, truncated at `|mτ + n| <= R`
/// with the continuum tail `y^{s-1} π R^{2-2s} / (s - 1)` added back.
pub fn lattice_sum(tau: C64, s: C64, radius: f64) -> C64 {
    let t = reduce_to_fundamental(tau);
    let (x, y) = (t.re, t.im);
    let r2 = radius * radius;
    let m_max = (radius / y).floor() as i64;
    let mut total = C64::new(0.0, 0.0);
    // rows in a fixed order, each summed outward from its centre
    for m in -m_max..=m_max {
        let mf = m as f64;
        let h2 = mf * mf * y * y;
        let span = (r2 - h2).max(0.0).sqrt();
        let centre = -mf * x;
        let lo = (centre - span).ceil() as i64;
        let hi = (centre + span).floor() as i64;
        let mut row = C64::new(0.0, 0.0);
        for n in (lo..=hi).rev() {
            if m == 0 && n == 0 {
                continue;
            }
            let u = mf * x + n as f64;
            let q = u * u + h2;
            row += (-s * q.ln()).exp();
        }
        total += row;
    }
    let ys = (s * y.ln()).exp();
    let tail = (s * y.ln() - y.ln()).exp() * PI * ((C64::new(2.0, 0.0) - 2.0 * s) * radius.ln()).exp() / (s - 1.0);
    total * ys + tail
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn p_pow(p: u64, s: C64) -> C64 {
    (-s * (p as f64).ln()).exp()
}

/// `A_M(τ, s)` by inverting
/// `M^{-s} G(Mτ, s) = Σ_{h | M} A_{M/h} h^{-2s} ζ(2s) Π_{q | M/h}(1 - q^{-2s})`.
fn primitive_sum(m: u64, tau: C64, s: C64, radius: f64, cache: &mut BTreeMap<u64, C64>) -> C64 {
    if let Some(v) = cache.get(&m) {
        return *v;
    }
    let two_s = s * 2.0;
    let z2s = zeta(two_s);
    let euler = |k: u64| -> C64 {
        factorize(k).into_iter().fold(C64::new(1.0, 0.0), |acc, (q, _)| acc * (1.0 - p_pow(q, two_s)))
    };
    let full = lattice_sum(tau * m as f64, s, radius) * p_pow(m, s);
    let mut rest = full / z2s;
    for h in divisors(m).into_iter().filter(|&h| h > 1) {
        let sub = primitive_sum(m / h, tau, s, radius, cache);
        rest -= sub * p_pow(h, two_s) * euler(m / h);
    }
    let v = rest / euler(m);
    cache.insert(m, v);
    v
}

/// `Σ_{gcd(c,d)=1, M|c} y^s/|cτ+d|^{2s}` over both signs, for tests.
pub fn primitive_lattice_sum(m: u64, tau: C64, s: C64, radius: f64) -> C64 {
    primitive_sum(m, tau, s, radius, &mut BTreeMap::new())
}
