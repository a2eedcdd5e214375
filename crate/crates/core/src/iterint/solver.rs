//! Gauss-Legendre collocation for `U' = A(s) U`, `U(a) = 1`, in a truncated
//! tensor algebra. Generators have no constant term, so `N` Picard sweeps
//! solve the collocation system exactly; accuracy is controlled by
//! comparing each step against its two halves.

use crate::ncalg::{mul_into, Series};
use crate::specfun::gauss_legendre;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Collocation nodes per step.
    pub nodes: usize,
    /// Accepted step-doubling discrepancy, relative to `max(1, |U|)`.
    pub tol: f64,
    /// Maximum bisection depth below the initial pieces.
    pub max_depth: usize,
    /// Initial uniform pieces per segment.
    pub pieces: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { nodes: 10, tol: 1e-13, max_depth: 40, pieces: 4 }
    }
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
    /// `q[j][l] = ∫_0^{x_j} L_l` on `[0, 1]`.
    q: Vec<Vec<f64>>,
}

impl Rule {
    fn new(m: usize) -> Self {
        let (x, w) = gauss_legendre(m);
        let x: Vec<f64> = x.iter().map(|t| 0.5 * (t + 1.0)).collect();
        let w: Vec<f64> = w.iter().map(|t| 0.5 * t).collect();
        let lagrange = |l: usize, t: f64| {
            (0..m).filter(|&i| i != l).fold(1.0, |acc, i| acc * (t - x[i]) / (x[l] - x[i]))
        };
        let q = (0..m)
            .map(|j| {
                (0..m)
                    .map(|l| (0..m).map(|i| w[i] * x[j] * lagrange(l, x[j] * x[i])).sum())
                    .collect()
            })
            .collect();
        Rule { x, w, q }
    }
}

pub(crate) struct Propagator<'a, F: Fn(f64) -> Series> {
    gen: F,
    template: &'a Series,
    cfg: &'a SolverConfig,
    rule: Rule,
}

impl<'a, F: Fn(f64) -> Series> Propagator<'a, F> {
    /// `gen(s)` must return `A(s)` (already including `ds`), with zero constant term.
    pub fn new(gen: F, template: &'a Series, cfg: &'a SolverConfig) -> Self {
        Propagator { gen, template, cfg, rule: Rule::new(cfg.nodes.max(2)) }
    }

    /// Solution operator from `a` to `b`.
    pub fn run(&self, a: f64, b: f64) -> Result<Series> {
        let pieces = self.cfg.pieces.max(1);
        let mut total = self.template.unit_like();
        for i in 0..pieces {
            let lo = a + (b - a) * i as f64 / pieces as f64;
            let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
            let u = self.step(lo, hi);
            let u = self.adapt(lo, hi, u, 0)?;
            total = u.mul_raw(&total);
        }
        Ok(total)
    }

    fn adapt(&self, a: f64, b: f64, whole: Series, depth: usize) -> Result<Series> {
        let m = 0.5 * (a + b);
        let u1 = self.step(a, m);
        let u2 = self.step(m, b);
        let comb = u2.mul_raw(&u1);
        let err = comb.max_abs_diff_raw(&whole);
        if err <= self.cfg.tol * comb.max_abs().max(1.0) {
            return Ok(comb);
        }
        if depth >= self.cfg.max_depth || !err.is_finite() {
            return Err(Error::StepSize(self.cfg.tol));
        }
        let left = self.adapt(a, m, u1, depth + 1)?;
        let right = self.adapt(m, b, u2, depth + 1)?;
        Ok(right.mul_raw(&left))
    }

    fn step(&self, a: f64, b: f64) -> Series {
        let h = b - a;
        let m = self.rule.x.len();
        let n = self.template.truncation();
        let layout = self.template.layout();
        let gens: Vec<Series> = self.rule.x.iter().map(|&x| (self.gen)(a + h * x).scale(C64::new(h, 0.0))).collect();
        let mut u: Vec<Series> = vec![self.template.unit_like(); m];
        let mut prod: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); u[0].coeffs().len()]; m];
        for sweep in 1..=n {
            for l in 0..m {
                prod[l].iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
                // degrees below `sweep` are already final
                mul_into(layout, gens[l].coeffs(), u[l].coeffs(), &mut prod[l], sweep);
            }
            for (j, uj) in u.iter_mut().enumerate() {
                let lo = layout.off[sweep];
                let c = uj.coeffs_mut();
                for v in c[lo..].iter_mut() {
                    *v = C64::new(0.0, 0.0);
                }
                for (l, pl) in prod.iter().enumerate() {
                    let q = self.rule.q[j][l];
                    for (cv, pv) in c[lo..].iter_mut().zip(&pl[lo..]) {
                        *cv += pv * q;
                    }
                }
            }
        }
        let mut out = self.template.unit_like();
        let c = out.coeffs_mut();
        for l in 0..m {
            let mut p = vec![C64::new(0.0, 0.0); c.len()];
            mul_into(layout, gens[l].coeffs(), u[l].coeffs(), &mut p, 1);
            let w = self.rule.w[l];
            for (cv, pv) in c.iter_mut().zip(&p) {
                *cv += pv * w;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::{Alphabet, Word};

    #[test]
    fn integration_matrix_exact_on_polynomials() {
        let r = Rule::new(6);
        for j in 0..6 {
            let xj = r.x[j];
            let int: f64 = (0..6).map(|l| r.q[j][l] * r.x[l].powi(4)).sum();
            assert!((int - xj.powi(5) / 5.0).abs() < 1e-14);
        }
    }

    #[test]
    fn commuting_generator_gives_exponential() {
        let a = Alphabet::indexed(1).unwrap();
        let t = Series::unit(&a, 5);
        let cfg = SolverConfig::default();
        let e0 = Series::letter(&a, 5, 0);
        // A(s) = cos(s) e0  ->  U = exp(sin(1) e0)
        let p = Propagator::new(|s: f64| e0.scale(C64::new(s.cos(), 0.0)), &t, &cfg);
        let u = p.run(0.0, 1.0).unwrap();
        let want = e0.scale(C64::new(1f64.sin(), 0.0)).exp().unwrap();
        assert!(u.max_abs_diff(&want).unwrap() < 1e-13);
        assert!((u.coeff(&Word(vec![0; 5])) - C64::new(1f64.sin().powi(5) / 120.0, 0.0)).norm() < 1e-14);
    }
}
