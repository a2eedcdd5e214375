//! Regulator vectors on the basis elements `e_{f,g,c}` and `e_{f,c,d}`.

use super::coeffs::BaseMode;
use crate::automorphic::gamma0_index;
use crate::{Error, Result, C64};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Coordinates of a regulator vector keyed by basis label.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulatorVector {
    pub mode: BaseMode,
    pub coords: BTreeMap<String, C64>,
}

pub fn label_fgc(f: &str, g: &str, c: &str) -> String {
    format!("e[{f},{g},{c}]")
}

pub fn label_fcd(f: &str, c: &str, d: &str) -> String {
    format!("e[{f},{c},{d}]")
}

impl RegulatorVector {
    pub fn get(&self, label: &str) -> Option<C64> {
        self.coords.get(label).copied()
    }

    /// True when every coordinate is exactly zero (or there are none).
    pub fn is_zero(&self) -> bool {
        self.coords.values().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// A nonzero coordinate means the extension class is nonzero.
    pub fn nonsplit(&self) -> bool {
        !self.is_zero()
    }

    pub fn certificate(&self) -> String {
        format!("NONSPLIT={}", self.nonsplit())
    }

    /// `basis_label,re,im` rows in label order.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
        w.write_record(["basis_label", "re", "im"]).map_err(io)?;
        for (k, v) in &self.coords {
            w.write_record([k.clone(), format!("{:.17e}", v.re), format!("{:.17e}", v.im)]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

/// Off-diagonal data for `e_{f,g,c}`, `f ≠ g`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairInput {
    pub f: String,
    pub g: String,
    pub cusp: String,
    /// `L^{(N)}(1, π_f × π_g)`.
    pub l_value: C64,
    /// `I_N(1; f, g; c)`.
    pub i_n: C64,
}

/// Diagonal data for `e_{f,f,c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagInput {
    pub f: String,
    pub cusp: String,
    /// `Res_{s=1} L^{(N)}(s, π_f × π_f)`.
    pub residue: Option<f64>,
    /// `I_N(1; f, f; c)`.
    pub i_n: C64,
    /// `d/ds I_N(s; f, f; c)` at `s = 1`.
    pub i_n_derivative: C64,
}

impl DiagInput {
    /// Finite part of `L^{(N)}(s) I_N(s)` at `s = 1` divided by the residue:
    /// `I_N(1)`, or `I_N'(1)` when `I_N(1) = 0` cancels the pole.
    pub fn local_factor(&self) -> C64 {
        if self.i_n == C64::new(0.0, 0.0) {
            self.i_n_derivative
        } else {
            self.i_n
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reg2Input {
    pub level: u64,
    /// `ζ^{(N)}(2)`.
    pub zeta_n2: f64,
    /// `(ω_f, ω_f)` for each form label.
    pub norms: BTreeMap<String, f64>,
    pub cusps: Vec<String>,
    pub pairs: Vec<PairInput>,
    pub diagonal: Vec<DiagInput>,
    pub mode: BaseMode,
    /// `𝓔_c(b, 1)` for each cusp label (ordinary base point only).
    pub eisenstein_at_base: BTreeMap<String, C64>,
}

impl Reg2Input {
    fn norm(&self, f: &str) -> Result<f64> {
        match self.norms.get(f) {
            Some(&n) if n > 0.0 => Ok(n),
            Some(_) => Err(Error::IncompleteTable(format!("(ω_{f}, ω_{f}) is not positive"))),
            None => Err(Error::IncompleteTable(format!("(ω_{f}, ω_{f})"))),
        }
    }

    fn check_complete(&self) -> Result<()> {
        for f in self.norms.keys() {
            for c in &self.cusps {
                if !self.diagonal.iter().any(|d| &d.f == f && &d.cusp == c) {
                    return Err(Error::IncompleteTable(format!("diagonal entry ({f}, {c})")));
                }
                for g in self.norms.keys().filter(|g| *g != f) {
                    if !self.pairs.iter().any(|p| &p.f == f && &p.g == g && &p.cusp == c) {
                        return Err(Error::IncompleteTable(format!("pair entry ({f}, {g}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `reg_2` on `e_{f,g,c}`:
///
/// * `f ≠ g`: `-2πi |G:K| I_N(1) L^{(N)}(1) / (ζ^{(N)}(2) (ω_f,ω_f)(ω_g,ω_g))`;
/// * `f = g`: `-2πi |G:K| Res L^{(N)} · I / (ζ^{(N)}(2) (ω_f,ω_f)^2)` with
///   `I` from [`DiagInput::local_factor`], minus `𝓔_c(b,1)/(ω_f,ω_f)` at an
///   ordinary base point.
pub fn reg2_assemble(inp: &Reg2Input) -> Result<RegulatorVector> {
    inp.check_complete()?;
    let index = gamma0_index(inp.level);
    let pre = C64::new(0.0, -2.0 * PI) * index / inp.zeta_n2;
    let mut coords = BTreeMap::new();
    for p in &inp.pairs {
        if p.f == p.g {
            return Err(Error::InvalidArgument(format!("pair entry with f = g = {}", p.f)));
        }
        let v = pre * p.i_n * p.l_value / (inp.norm(&p.f)? * inp.norm(&p.g)?);
        coords.insert(label_fgc(&p.f, &p.g, &p.cusp), v);
    }
    for d in &inp.diagonal {
        let res = d.residue.ok_or_else(|| Error::MissingResidue(d.f.clone()))?;
        let n = inp.norm(&d.f)?;
        let mut v = pre * res * d.local_factor() / (n * n);
        if inp.mode == BaseMode::Rational {
            let e = inp
                .eisenstein_at_base
                .get(&d.cusp)
                .ok_or_else(|| Error::IncompleteTable(format!("E_{}(b, 1)", d.cusp)))?;
            v -= e / n;
        }
        coords.insert(label_fgc(&d.f, &d.f, &d.cusp), v);
    }
    Ok(RegulatorVector { mode: inp.mode, coords })
}

/// Data for the prime-level display with complete L-values.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeLevelInput {
    pub p: u64,
    /// `ζ^{(p)}(2)`.
    pub zeta_p2: f64,
    /// Unnormalized `(f, f) = (ω_f, ω_f) / 4π`.
    pub petersson: BTreeMap<String, f64>,
    /// `(f, g, ε_f ε_g, L(1, π_f × π_g))` for `f ≠ g`.
    pub pairs: Vec<(String, String, i8, C64)>,
    /// `Res_{s=1} L(s, π_f × π_f)` of the complete L-function.
    pub residues: BTreeMap<String, f64>,
    pub mode: BaseMode,
    /// `𝓔_0(b, 1)`.
    pub eisenstein_at_base: Option<C64>,
}

/// The prime-level display on `e_{f,g}` (one cusp besides `∞`):
/// `-2πi L(1)/(ζ^{(p)}(2)(4π)^2 (f,f)(g,g))` when `ε_f ε_g = -1`, and on the
/// diagonal `-2πi (Res L · log p / (ζ^{(p)}(2)(4π)^2 (f,f)^2) - 𝓔_0(b,1)/(4π (f,f)))`.
pub fn prime_level_display(inp: &PrimeLevelInput) -> Result<RegulatorVector> {
    let mi = C64::new(0.0, -2.0 * PI);
    let four_pi2 = (4.0 * PI).powi(2);
    let norm = |f: &str| {
        inp.petersson.get(f).copied().ok_or_else(|| Error::IncompleteTable(format!("(f, f) for {f}")))
    };
    let mut coords = BTreeMap::new();
    for (f, g, sign, l) in &inp.pairs {
        let v = if *sign == -1 { mi * l / (inp.zeta_p2 * four_pi2 * norm(f)? * norm(g)?) } else { C64::new(0.0, 0.0) };
        coords.insert(format!("e[{f},{g}]"), v);
    }
    for (f, &nf) in &inp.petersson {
        let res = *inp.residues.get(f).ok_or_else(|| Error::MissingResidue(f.clone()))?;
        let mut inner = C64::new(res * (inp.p as f64).ln() / (inp.zeta_p2 * four_pi2 * nf * nf), 0.0);
        if inp.mode == BaseMode::Rational {
            let e = inp.eisenstein_at_base.ok_or_else(|| Error::IncompleteTable("E_0(b, 1)".into()))?;
            inner -= e / (4.0 * PI * nf);
        }
        coords.insert(format!("e[{f},{f}]"), mi * inner);
    }
    Ok(RegulatorVector { mode: inp.mode, coords })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reg3Input {
    pub level: u64,
    pub zeta_n2: f64,
    pub norms: BTreeMap<String, f64>,
    pub cusps: Vec<String>,
    /// `I_N(1; E_d, f; c)` keyed by `(d, f, c)`.
    pub i_n_eisenstein: BTreeMap<(String, String, String), C64>,
    /// `L^{(N)}(1/2, π_f) L^{(N)}(3/2, π_f)` for each form.
    pub l_products: BTreeMap<String, C64>,
}

/// `reg_3` on `e_{f,c,d}`, `c ≠ d`:
/// `2πi |G:K| (I_N(1; E_d, f; c) - I_N(1; E_c, f; d)) / (ζ^{(N)}(2)(ω_f,ω_f)) · L(1/2)L(3/2)`.
/// With a single cusp besides `∞` there are no coordinates.
pub fn reg3_assemble(inp: &Reg3Input, mode: BaseMode) -> Result<RegulatorVector> {
    let index = gamma0_index(inp.level);
    let pre = C64::new(0.0, 2.0 * PI) * index / inp.zeta_n2;
    let get = |d: &str, f: &str, c: &str| {
        inp.i_n_eisenstein
            .get(&(d.to_string(), f.to_string(), c.to_string()))
            .copied()
            .ok_or_else(|| Error::IncompleteTable(format!("I_N(1; E_{d}, {f}; {c})")))
    };
    let mut coords = BTreeMap::new();
    for (f, &n) in &inp.norms {
        if !(n > 0.0) {
            return Err(Error::IncompleteTable(format!("(ω_{f}, ω_{f}) is not positive")));
        }
        for c in &inp.cusps {
            for d in inp.cusps.iter().filter(|d| *d != c) {
                let l = inp
                    .l_products
                    .get(f)
                    .copied()
                    .ok_or_else(|| Error::IncompleteTable(format!("L(1/2)L(3/2) for {f}")))?;
                let v = pre * (get(d, f, c)? - get(c, f, d)?) / n * l;
                coords.insert(label_fcd(f, c, d), v);
            }
        }
    }
    Ok(RegulatorVector { mode, coords })
}
