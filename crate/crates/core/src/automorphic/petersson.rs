//! The pairing `(ω_f, ω_g)` of weight-2 cusp forms `ω_f = 2πi f(τ) dτ`,
//! integrated over `Γ_0(N)\H` as a union of `SL_2(ℤ)`-translates of the
//! standard fundamental domain.

use super::eigenform::EigenformData;
use crate::specfun::{gauss_legendre, gcd};
use crate::{Error, Result, C64};
use rayon::prelude::*;
use std::f64::consts::PI;

/// `Σ_{n >= 0} c_n q^n` with `q = e^{2πiτ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    pub coeffs: Vec<C64>,
}

impl QExpansion {
    pub fn new(coeffs: Vec<C64>) -> Self {
        QExpansion { coeffs }
    }

    pub fn from_eigenform(f: &EigenformData) -> Self {
        QExpansion { coeffs: f.coefficients().iter().map(|&a| C64::new(a, 0.0)).collect() }
    }

    fn is_cuspidal(&self) -> bool {
        self.coeffs.first().map_or(true, |c| c.norm() == 0.0)
    }

    /// Value at `τ`, summing until `n^{3/2}|q|^n` falls below `tol`.
    pub fn eval(&self, tau: C64, tol: f64) -> Result<C64> {
        let aq = (-2.0 * PI * tau.im).exp();
        let q = C64::from_polar(aq, 2.0 * PI * tau.re);
        let mut acc = C64::new(0.0, 0.0);
        let mut qn = C64::new(1.0, 0.0);
        let mut mag = 1.0f64;
        for (n, c) in self.coeffs.iter().enumerate() {
            acc += c * qn;
            qn *= q;
            mag *= aq;
            let nf = (n + 1) as f64;
            if n > 0 && nf * nf.sqrt() * mag < tol {
                return Ok(acc);
            }
        }
        Err(Error::InsufficientData(format!(
            "{} coefficients do not reach {tol:e} at Im τ = {}",
            self.coeffs.len(),
            tau.im
        )))
    }
}

/// Quadrature knobs for [`petersson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeterssonConfig {
    /// Gauss-Legendre nodes in `x ∈ [-1/2, 1/2]`.
    pub nodes_x: usize,
    /// Gauss-Legendre nodes per `y` panel.
    pub nodes_y: usize,
    /// Integration in the fundamental domain stops at this height.
    pub y_cutoff: f64,
    /// Truncation target for q-series evaluation.
    pub series_tol: f64,
}

impl Default for PeterssonConfig {
    fn default() -> Self {
        PeterssonConfig { nodes_x: 32, nodes_y: 24, y_cutoff: 40.0, series_tol: 1e-15 }
    }
}

impl PeterssonConfig {
    /// Refinement level `k` doubles the nodes `k` times from 8 by 6.
    pub fn depth(k: u32) -> Self {
        PeterssonConfig { nodes_x: 8 << k, nodes_y: 6 << k, ..Default::default() }
    }
}

/// Integer matrix `[[a, b], [c, d]]` of determinant one.
pub type Mat2 = [i64; 4];

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Right coset representatives of `Γ_0(N)` in `SL_2(ℤ)`, one per point of
/// `P^1(ℤ/N)`, lifted with small entries.
pub fn coset_reps(level: u64) -> Vec<Mat2> {
    let n = level as i64;
    if n == 1 {
        return vec![[1, 0, 0, 1]];
    }
    let units: Vec<i64> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut reps = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c, d), n) != 1 {
                continue;
            }
            let key = units.iter().map(|u| ((u * c) % n, (u * d) % n)).min().unwrap();
            if !seen.insert(key) {
                continue;
            }
            reps.push(lift_row(c, d, n));
        }
    }
    reps
}

fn centred(v: i64, n: i64) -> i64 {
    let r = v.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

fn lift_row(c: i64, d: i64, n: i64) -> Mat2 {
    if c == 0 {
        return [1, 0, 0, 1];
    }
    let c0 = centred(c, n);
    let d0 = centred(d, n);
    let mut k = 0i64;
    let d1 = loop {
        let cand = [d0 + k * n, d0 - k * n];
        if let Some(&x) = cand.iter().find(|&&x| gcd(c0, x) == 1) {
            break x;
        }
        k += 1;
    };
    // a d1 - b c0 = 1
    let (_, x, y) = ext_gcd(d1, c0);
    [x, -y, c0, d1]
}

fn act(g: &Mat2, z: C64) -> (C64, C64) {
    let num = z * g[0] as f64 + g[1] as f64;
    let den = z * g[2] as f64 + g[3] as f64;
    (num / den, den)
}

/// `(ω_f, ω_g) = 4π ∫_{Γ_0(N)\H} f \bar g dx dy`.
pub fn petersson(f: &QExpansion, g: &QExpansion, level: u64, cfg: &PeterssonConfig) -> Result<C64> {
    if !f.is_cuspidal() {
        return Err(Error::NotCuspidal("first form has a constant term".into()));
    }
    if !g.is_cuspidal() {
        return Err(Error::NotCuspidal("second form has a constant term".into()));
    }
    if cfg.nodes_x < 2 || cfg.nodes_y < 2 || cfg.y_cutoff <= 1.5 {
        return Err(Error::InvalidArgument("quadrature too coarse".into()));
    }
    let (xs, wx) = gauss_legendre(cfg.nodes_x);
    let (ys, wy) = gauss_legendre(cfg.nodes_y);
    let mut edges = vec![1.5];
    while *edges.last().unwrap() < cfg.y_cutoff {
        let next = (edges.last().unwrap() * 2.0).min(cfg.y_cutoff);
        edges.push(next);
    }
    let reps = coset_reps(level);
    let parts: Vec<C64> = reps
        .par_iter()
        .map(|gm| {
            let mut acc = C64::new(0.0, 0.0);
            for (xi, wxi) in xs.iter().zip(&wx) {
                let x = 0.5 * xi;
                let wxs = 0.5 * wxi;
                let y0 = (1.0 - x * x).sqrt();
                let mut lo = y0;
                for &hi in &edges {
                    let half = 0.5 * (hi - lo);
                    let mid = 0.5 * (hi + lo);
                    for (yj, wyj) in ys.iter().zip(&wy) {
                        let z = C64::new(x, mid + half * yj);
                        let (w, den) = act(gm, z);
                        let fv = f.eval(w, cfg.series_tol)?;
                        let gv = g.eval(w, cfg.series_tol)?;
                        acc += fv * gv.conj() * den.norm_sqr().powi(-2) * (wxs * half * wyj);
                    }
                    lo = hi;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let total: C64 = parts.iter().sum();
    Ok(total * (4.0 * PI))
}

/// `[SL_2(ℤ) : Γ_0(N)] = N Π_{p|N} (1 + 1/p)`.
pub fn gamma0_index(level: u64) -> f64 {
    crate::specfun::factorize(level)
        .into_iter()
        .fold(level as f64, |acc, (p, _)| acc * (1.0 + 1.0 / p as f64))
}
