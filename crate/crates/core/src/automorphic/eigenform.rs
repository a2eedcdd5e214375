//! Hecke eigenvalue data, local representations at each prime, and the
//! point-counting generator for elliptic curves.

use crate::specfun::{factorize, primes_up_to, smallest_prime_factors};
use crate::{Error, Result, C64};
use serde::Deserialize;
use std::collections::BTreeMap;

const EIGEN_TOL: f64 = 1e-9;

/// Type of a local component `π_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalKind {
    /// Satake pair `{α, α'}` with `αα' = 1`.
    Unramified { alpha: C64, alpha_inv: C64 },
    /// `χ St` with unramified quadratic `χ`, `chi = χ(p)`.
    Steinberg { chi: i8 },
    /// Conductor exponent at least 2.
    Ramified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalRep {
    pub p: u64,
    /// `v_p(N)`.
    pub r: u32,
    pub kind: LocalKind,
    /// `ε(1/2, π_p)` if known.
    pub epsilon: Option<i8>,
}

impl LocalRep {
    /// Unramified component with Satake parameters the roots of
    /// `x^2 - (a_p / √p) x + 1`.
    pub fn unramified(p: u64, a_p: f64) -> Self {
        let t = C64::new(a_p / (p as f64).sqrt(), 0.0);
        let disc = (t * t - 4.0).sqrt();
        let alpha = (t + disc) * 0.5;
        let alpha_inv = (t - disc) * 0.5;
        LocalRep { p, r: 0, kind: LocalKind::Unramified { alpha, alpha_inv }, epsilon: None }
    }

    pub fn steinberg(p: u64, chi: i8, epsilon: Option<i8>) -> Result<Self> {
        if chi != 1 && chi != -1 {
            return Err(Error::InvalidArgument(format!("χ(p) must be ±1, got {chi}")));
        }
        check_sign(epsilon)?;
        Ok(LocalRep { p, r: 1, kind: LocalKind::Steinberg { chi }, epsilon })
    }

    pub fn ramified(p: u64, r: u32, epsilon: Option<i8>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidArgument("deeper ramification needs v_p(N) >= 2".into()));
        }
        check_sign(epsilon)?;
        Ok(LocalRep { p, r, kind: LocalKind::Ramified, epsilon })
    }
}

fn check_sign(e: Option<i8>) -> Result<()> {
    match e {
        None | Some(1) | Some(-1) => Ok(()),
        Some(v) => Err(Error::InvalidArgument(format!("epsilon factor must be ±1, got {v}"))),
    }
}

/// One record of the local-representation sidecar,
/// `{"p":11,"kind":"steinberg","chi":1,"epsilon":-1}`.
#[derive(Debug, Clone, Deserialize)]
pub struct LocalRecord {
    pub p: u64,
    pub kind: String,
    #[serde(default)]
    pub chi: Option<i8>,
    #[serde(default)]
    pub epsilon: Option<i8>,
}

/// Parses a single record or a list of records.
pub fn parse_local_sidecar(text: &str) -> Result<Vec<LocalRecord>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(LocalRecord),
        Many(Vec<LocalRecord>),
    }
    match serde_json::from_str::<OneOrMany>(text).map_err(|e| Error::Parse(e.to_string()))? {
        OneOrMany::One(r) => Ok(vec![r]),
        OneOrMany::Many(v) => Ok(v),
    }
}

/// Normalized Hecke eigenvalues `a(1..=n_max)` of a weight-2 newform.
#[derive(Debug, Clone)]
pub struct EigenformData {
    pub level: u64,
    /// `a[n]` for `n >= 1`; `a[0]` is unused and zero.
    a: Vec<f64>,
    locals: BTreeMap<u64, LocalRep>,
    pub source: String,
}

impl EigenformData {
    /// Validates eigenvalues `a[1..]` for level `level`.
    pub fn new(level: u64, a: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidEigenform("level must be positive".into()));
        }
        if a.len() < 2 {
            return Err(Error::InvalidEigenform("no eigenvalues".into()));
        }
        let mut d = EigenformData { level, a, locals: BTreeMap::new(), source: source.into() };
        d.a[0] = 0.0;
        d.check()?;
        for (p, r) in factorize(level) {
            let rep = if r == 1 {
                let chi = d.a.get(p as usize).copied().unwrap_or(1.0);
                LocalRep::steinberg(p, if chi < 0.0 { -1 } else { 1 }, None)?
            } else {
                LocalRep::ramified(p, r, None)?
            };
            d.locals.insert(p, rep);
        }
        Ok(d)
    }

    /// Reads `n,a_n` rows with `n` running contiguously from 1.
    pub fn from_csv(text: &str, level: u64, source: impl Into<String>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "a_n" {
            return Err(Error::Parse("expected header `n,a_n`".into()));
        }
        let mut a = vec![0.0];
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let n: usize = rec[0].parse().map_err(|_| Error::Parse(format!("bad index `{}`", &rec[0])))?;
            if n != i + 1 {
                return Err(Error::Parse(format!("expected n = {}, found {n}", i + 1)));
            }
            let v: f64 = rec[1].parse().map_err(|_| Error::Parse(format!("bad value `{}`", &rec[1])))?;
            a.push(v);
        }
        Self::new(level, a, source)
    }

    /// Applies local-representation records (sidecar data).
    pub fn with_locals(mut self, records: &[LocalRecord]) -> Result<Self> {
        for rec in records {
            let r = factorize(self.level).into_iter().find(|&(p, _)| p == rec.p).map(|(_, r)| r);
            let Some(r) = r else {
                return Err(Error::InvalidArgument(format!("p = {} does not divide N = {}", rec.p, self.level)));
            };
            let rep = match rec.kind.as_str() {
                "steinberg" => {
                    if r != 1 {
                        return Err(Error::InvalidArgument(format!("Steinberg at p = {} needs v_p(N) = 1", rec.p)));
                    }
                    let chi = rec.chi.ok_or_else(|| Error::Parse(format!("missing chi at p = {}", rec.p)))?;
                    LocalRep::steinberg(rec.p, chi, rec.epsilon)?
                }
                "ramified" => LocalRep::ramified(rec.p, r, rec.epsilon)?,
                other => return Err(Error::UnsupportedLocal(other.to_string())),
            };
            self.locals.insert(rec.p, rep);
        }
        Ok(self)
    }

    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    /// `a(n)`; `None` beyond the data.
    pub fn a(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return None;
        }
        self.a.get(n).copied()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    /// Local component at `p`.
    pub fn local(&self, p: u64) -> Result<LocalRep> {
        if let Some(r) = self.locals.get(&p) {
            return Ok(*r);
        }
        let ap = self
            .a(p as usize)
            .ok_or_else(|| Error::InsufficientData(format!("a({p}) not available")))?;
        Ok(LocalRep::unramified(p, ap))
    }

    pub fn bad_locals(&self) -> impl Iterator<Item = &LocalRep> {
        self.locals.values()
    }

    /// `n,a_n` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n\n");
        for (n, v) in self.a.iter().enumerate().skip(1) {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                out.push_str(&format!("{n},{}\n", *v as i64));
            } else {
                out.push_str(&format!("{n},{v}\n"));
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        let n_max = self.n_max();
        let close = |x: f64, y: f64| (x - y).abs() <= EIGEN_TOL * (1.0 + x.abs().max(y.abs()));
        if !close(self.a[1], 1.0) {
            return Err(Error::InvalidEigenform(format!("a(1) = {} is not 1", self.a[1])));
        }
        let spf = smallest_prime_factors(n_max);
        for n in 2..=n_max {
            let p = spf[n];
            let mut m = n;
            let mut k = 0u32;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            let pk = n / m;
            if m > 1 {
                let want = self.a[m] * self.a[pk];
                if !close(self.a[n], want) {
                    return Err(Error::InvalidEigenform(format!(
                        "a({n}) = {} but a({m}) a({pk}) = {want}",
                        self.a[n]
                    )));
                }
                continue;
            }
            let bad = self.level % p as u64 == 0;
            if k == 1 {
                if !bad && self.a[p].abs() > 2.0 * (p as f64).sqrt() + EIGEN_TOL {
                    return Err(Error::InvalidEigenform(format!("|a({p})| exceeds 2√{p}")));
                }
                continue;
            }
            let prev = self.a[n / p];
            let want = if bad {
                self.a[p] * prev
            } else {
                self.a[p] * prev - p as f64 * self.a[n / (p * p)]
            };
            if !close(self.a[n], want) {
                return Err(Error::InvalidEigenform(format!(
                    "a({n}) = {} violates the Hecke recursion (expected {want})",
                    self.a[n]
                )));
            }
        }
        Ok(())
    }
}

/// Weierstrass coefficients `[a1, a2, a3, a4, a6]` of
/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
pub type Ainvs = [i64; 5];

/// `y^2 + y = x^3 - x^2 - 10x - 20`, conductor 11.
pub const CURVE_11A: Ainvs = [0, -1, 1, -10, -20];

/// `a_p = p + 1 - #E(F_p)` by counting affine points of the reduction
/// (the singular point is included at bad primes).
pub fn point_count_ap(e: &Ainvs, p: u64) -> i64 {
    let pm = p as i64;
    let m = |v: i64| v.rem_euclid(pm);
    let [a1, a2, a3, a4, a6] = e.map(m);
    let mut affine: i64 = 0;
    if p == 2 {
        for x in 0..2 {
            for y in 0..2 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if m(lhs - rhs) == 0 {
                    affine += 1;
                }
            }
        }
        return pm - affine;
    }
    // (2y + a1 x + a3)^2 = 4(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for t in 1..pm {
        chi[((t * t) % pm) as usize] = 1;
    }
    for x in 0..pm {
        let cubic = m(m(m(x * x) * x) + m(a2 * m(x * x)) + a4 * x + a6);
        let lin = m(a1 * x + a3);
        let d = m(4 * cubic + lin * lin);
        affine += 1 + chi[d as usize] as i64;
    }
    pm - affine
}

/// Eigenvalues `a(1..=n_max)` from prime values, extended by the Hecke
/// recursion (good primes) or `a(p^k) = a(p)^k` (bad primes).
pub fn eigenvalues_from_primes(level: u64, n_max: usize, ap: impl Fn(u64) -> f64) -> Vec<f64> {
    let mut a = vec![0.0; n_max + 1];
    if n_max == 0 {
        return a;
    }
    a[1] = 1.0;
    let spf = smallest_prime_factors(n_max);
    let mut prime_val = vec![0.0; n_max + 1];
    for p in primes_up_to(n_max) {
        prime_val[p] = ap(p as u64);
    }
    for n in 2..=n_max {
        let p = spf[n];
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        let pk = n / m;
        a[n] = if m > 1 {
            a[m] * a[pk]
        } else if pk == p {
            prime_val[p]
        } else if level % p as u64 == 0 {
            prime_val[p] * a[n / p]
        } else {
            prime_val[p] * a[n / p] - p as f64 * a[n / (p * p)]
        };
    }
    a
}

/// Eigenform of an elliptic curve of conductor `level` by point counting.
pub fn elliptic_curve_eigenform(e: &Ainvs, level: u64, n_max: usize) -> Result<EigenformData> {
    let a = eigenvalues_from_primes(level, n_max, |p| point_count_ap(e, p) as f64);
    EigenformData::new(level, a, "point count")
}
