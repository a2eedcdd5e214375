use crate::ncalg::{Alphabet, Series, Word};
use crate::{Error, Result, C64};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `Σ c_k dt/(t - a_k) + Σ p_j t^j dt`, optionally complex-conjugated as a
/// whole (pullback `conj(f(γ) γ')`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OneForm {
    pub poles: Vec<(C64, C64)>,
    pub poly: Vec<C64>,
    pub conjugate: bool,
}

impl OneForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c dt / (t - a)`.
    pub fn log(a: C64, c: C64) -> Self {
        OneForm { poles: vec![(a, c)], ..Self::default() }
    }

    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        OneForm { poly: coeffs, ..Self::default() }
    }

    pub fn with_pole(mut self, a: C64, c: C64) -> Result<Self> {
        if self.poles.iter().any(|(b, _)| (b - a).norm() == 0.0) {
            return Err(Error::InvalidArgument(format!("duplicate pole at {a}")));
        }
        self.poles.push((a, c));
        Ok(self)
    }

    pub fn conjugated(mut self) -> Self {
        self.conjugate = !self.conjugate;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.poles.iter().all(|(_, c)| c.norm() == 0.0) && self.poly.iter().all(|c| c.norm() == 0.0)
    }

    /// Coefficient of `dt` at `t` before any conjugation.
    pub fn coeff_at(&self, t: C64) -> C64 {
        let mut v: C64 = self.poles.iter().map(|(a, c)| c / (t - a)).sum();
        v += self.poly.iter().rev().fold(C64::new(0.0, 0.0), |acc, &p| acc * t + p);
        v
    }

    /// Pullback coefficient `f(t) dt/ds` (conjugated for conjugate forms).
    pub fn pullback(&self, t: C64, dt: C64) -> C64 {
        let v = self.coeff_at(t) * dt;
        if self.conjugate {
            v.conj()
        } else {
            v
        }
    }

    /// Pullback along `t = c + δ` with `dt/du = δ` (logarithmic coordinate at
    /// `c`). A pole at `c` contributes its residue exactly, or nothing when
    /// `drop_c` is set.
    pub(crate) fn pullback_log(&self, c: C64, delta: C64, drop_c: bool) -> C64 {
        let mut v = C64::new(0.0, 0.0);
        for &(a, r) in &self.poles {
            let off = c - a;
            if off.norm() <= PUNCTURE_TOL * (1.0 + c.norm()) {
                if !drop_c {
                    v += r;
                }
            } else {
                v += r * delta / (off + delta);
            }
        }
        let t = c + delta;
        v += delta * self.poly.iter().rev().fold(C64::new(0.0, 0.0), |acc, &p| acc * t + p);
        if self.conjugate {
            v.conj()
        } else {
            v
        }
    }

    /// Residue at `c`, `None` if `c` is not a pole.
    pub fn residue_at(&self, c: C64) -> Option<C64> {
        self.poles
            .iter()
            .find(|(a, _)| (a - c).norm() <= PUNCTURE_TOL * (1.0 + c.norm()))
            .map(|(_, r)| *r)
    }
}

pub(crate) const PUNCTURE_TOL: f64 = 1e-12;

/// `Ω = Σ_w w α_w` with one-forms on letters (degree one) and optionally on
/// longer words; unspecified words carry the zero form.
#[derive(Debug, Clone)]
pub struct Connection {
    alphabet: Arc<Alphabet>,
    truncation: usize,
    forms: Vec<(Word, OneForm)>,
}

impl Connection {
    pub fn new(alphabet: &Arc<Alphabet>, truncation: usize) -> Self {
        Connection { alphabet: alphabet.clone(), truncation, forms: Vec::new() }
    }

    /// `e0 dt/t + e1 dt/(t-1)` on `P^1 - {0, 1, ∞}`.
    pub fn kz(truncation: usize) -> Self {
        let a = Alphabet::new(["e0", "e1"]).expect("valid alphabet");
        let one = C64::new(1.0, 0.0);
        Connection::new(&a, truncation)
            .with_form(Word(vec![0]), OneForm::log(C64::new(0.0, 0.0), one))
            .and_then(|c| c.with_form(Word(vec![1]), OneForm::log(one, one)))
            .expect("valid connection")
    }

    pub fn with_form(mut self, w: Word, form: OneForm) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidArgument("the empty word carries no form".into()));
        }
        if let Some(&a) = w.0.iter().find(|&&a| a >= self.alphabet.len()) {
            return Err(Error::UnknownLetter(a.to_string()));
        }
        for (i, (a, _)) in form.poles.iter().enumerate() {
            if form.poles[..i].iter().any(|(b, _)| b == a) {
                return Err(Error::InvalidArgument(format!("duplicate pole at {a}")));
            }
        }
        self.forms.retain(|(v, _)| *v != w);
        self.forms.push((w, form));
        Ok(self)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = n;
        self
    }

    pub fn forms(&self) -> &[(Word, OneForm)] {
        &self.forms
    }

    pub fn form(&self, w: &Word) -> Option<&OneForm> {
        self.forms.iter().find(|(v, _)| v == w).map(|(_, f)| f)
    }

    /// All pole locations of all forms.
    pub fn poles(&self) -> Vec<C64> {
        let mut out: Vec<C64> = Vec::new();
        for (_, f) in &self.forms {
            for (a, _) in &f.poles {
                if !out.iter().any(|b| (b - a).norm() <= PUNCTURE_TOL) {
                    out.push(*a);
                }
            }
        }
        out
    }

    /// Forms whose words fit in the truncation, with their dense indices.
    pub(crate) fn active(&self, template: &Series) -> Vec<(usize, &OneForm)> {
        let l = template.layout();
        self.forms
            .iter()
            .filter(|(w, f)| w.len() <= self.truncation && !f.is_zero())
            .map(|(w, f)| (l.index(&w.0), f))
            .collect()
    }

    /// Parses `{"alphabet": [...], "truncation": N, "forms": {"e0": {"poles":
    /// [{"at": [re, im], "residue": [re, im]}], "poly": [[re, im], ...],
    /// "conjugate": false}, "e0.e1": {...}}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Pole {
            at: [f64; 2],
            residue: [f64; 2],
        }
        #[derive(Deserialize)]
        struct Form {
            #[serde(default)]
            poles: Vec<Pole>,
            #[serde(default)]
            poly: Vec<[f64; 2]>,
            #[serde(default)]
            conjugate: bool,
        }
        #[derive(Deserialize)]
        struct File {
            alphabet: Vec<String>,
            truncation: usize,
            forms: BTreeMap<String, Form>,
        }
        let f: File = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let alphabet = Alphabet::new(f.alphabet)?;
        let mut conn = Connection::new(&alphabet, f.truncation);
        for (word, form) in f.forms {
            let w = alphabet.parse_word(&word)?;
            let mut of = OneForm {
                poly: form.poly.iter().map(|p| C64::new(p[0], p[1])).collect(),
                conjugate: form.conjugate,
                ..OneForm::default()
            };
            for p in form.poles {
                of = of.with_pole(C64::new(p.at[0], p.at[1]), C64::new(p.residue[0], p.residue[1]))?;
            }
            conn = conn.with_form(w, of)?;
        }
        Ok(conn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_evaluation() {
        let f = OneForm::log(C64::new(1.0, 0.0), C64::new(2.0, 0.0))
            .with_pole(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
            .unwrap();
        let t = C64::new(0.5, 0.5);
        let want = 2.0 / (t - 1.0) + 1.0 / t;
        assert!((f.coeff_at(t) - want).norm() < 1e-15);
        let g = OneForm::polynomial(vec![C64::new(1.0, 0.0), C64::new(0.0, 3.0)]);
        assert!((g.coeff_at(t) - (1.0 + C64::new(0.0, 3.0) * t)).norm() < 1e-15);
        assert!(f.clone().with_pole(C64::new(0.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn log_pullback_keeps_residue_exact() {
        let f = OneForm::log(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
            .with_pole(C64::new(1.0, 0.0), C64::new(1.0, 0.0))
            .unwrap();
        let delta = C64::new(1e-300, 0.0);
        let v = f.pullback_log(C64::new(0.0, 0.0), delta, false);
        assert_eq!(v, C64::new(1.0, 0.0) + delta / (C64::new(-1.0, 0.0) + delta));
        assert!(f.pullback_log(C64::new(0.0, 0.0), delta, true).norm() < 1e-299);
    }

    #[test]
    fn json_connection() {
        let text = r#"{"alphabet":["a","b"],"truncation":3,
            "forms":{"a":{"poles":[{"at":[0,0],"residue":[1,0]}]},
                     "b":{"poles":[{"at":[1,0],"residue":[1,0]}]},
                     "a.b":{"poly":[[0.5,0]]}}}"#;
        let c = Connection::from_json(text).unwrap();
        assert_eq!(c.truncation(), 3);
        assert_eq!(c.forms().len(), 3);
        assert_eq!(c.poles().len(), 2);
        assert!(c.form(&Word(vec![0, 1])).is_some());
        assert!(Connection::from_json(r#"{"alphabet":["a"],"truncation":1,"forms":{"z":{}}}"#).is_err());
    }
}
