//! Matrix coefficients `⟨[ω]⊗[ω'], φ∞^{[1,2]}([η]^∨)⟩` expressed through
//! inner products of one-forms.

use crate::{Error, Result, C64};
use std::collections::BTreeMap;

/// Ordinary base point (`𝓔(b)` subtracted) or tangential base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMode {
    Rational,
    Tangential,
}

/// Label of the complex conjugate of a holomorphic basis form.
pub fn conj_label(label: &str) -> String {
    format!("conj({label})")
}

/// Inner products of a basis `𝓑_h ⊔ 𝓑_ah ⊔ 𝓑_e`. `𝓑_ah` is implicit: each
/// holomorphic label `f` has the conjugate `conj(f)` with the same norm.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InnerProductTable {
    pub holomorphic: Vec<String>,
    pub eisenstein: Vec<String>,
    /// `(ω_i, ω_i)` for each holomorphic label.
    pub norms: BTreeMap<String, f64>,
    /// `(𝓔_{ω'} ω_i, ω_j)` keyed by `(ω', i, j)`.
    pub e_pairings: BTreeMap<(String, String, String), C64>,
    /// `𝓔_{ω'}(b)` for an ordinary base point.
    pub e_at_base: BTreeMap<String, C64>,
    /// `(𝓕_{ω,ω'}, η)` keyed by `(ω, ω', η)` with `η` a label of `𝓑_0`.
    pub f_pairings: BTreeMap<(String, String, String), C64>,
    /// Every element of `𝓑_0` is orthogonal to `𝓑_e`.
    pub orth: bool,
}

impl InnerProductTable {
    fn norm(&self, label: &str) -> Result<f64> {
        let n = *self
            .norms
            .get(label)
            .ok_or_else(|| Error::IncompleteTable(format!("norm of {label}")))?;
        if !(n > 0.0) {
            return Err(Error::IncompleteTable(format!("norm of {label} is not positive")));
        }
        Ok(n)
    }

    fn b0_labels(&self) -> Vec<(String, String)> {
        // (label of η, holomorphic label carrying its norm)
        let mut out: Vec<(String, String)> = self.holomorphic.iter().map(|h| (h.clone(), h.clone())).collect();
        out.extend(self.holomorphic.iter().map(|h| (conj_label(h), h.clone())));
        out
    }

    /// All basis labels in the order `𝓑_h`, `𝓑_ah`, `𝓑_e`.
    pub fn basis(&self) -> Vec<String> {
        let mut out: Vec<String> = self.b0_labels().into_iter().map(|(l, _)| l).collect();
        out.extend(self.eisenstein.iter().cloned());
        out
    }

    fn f_pairing(&self, w: &str, w2: &str, eta: &str) -> Result<C64> {
        if w == w2 {
            return Ok(C64::new(0.0, 0.0));
        }
        let key = |a: &str, b: &str| (a.to_string(), b.to_string(), eta.to_string());
        if let Some(v) = self.f_pairings.get(&key(w, w2)) {
            return Ok(*v);
        }
        if let Some(v) = self.f_pairings.get(&key(w2, w)) {
            return Ok(-v);
        }
        Err(Error::IncompleteTable(format!("(F[{w},{w2}], {eta})")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCoefficient {
    pub omega: String,
    pub omega_prime: String,
    /// Label of `η` in `[η]^∨`.
    pub eta: String,
    pub value: C64,
}

/// `ω ∈ 𝓑_h`, `ω' ∈ 𝓑_e`: for `η = conj(ω_j)` the value is
/// `(𝓔_{ω'} ω, ω_j) / (ω_j, ω_j)`, minus `𝓔_{ω'}(b)` when `ω_j = ω` at an
/// ordinary base point; every other `η` gives 0.
pub fn matrix_coeff_second_case(table: &InnerProductTable, mode: BaseMode) -> Result<Vec<MatrixCoefficient>> {
    let basis = table.basis();
    let mut out = Vec::new();
    for w in &table.holomorphic {
        for w2 in &table.eisenstein {
            for eta in &basis {
                let target = table.holomorphic.iter().find(|h| conj_label(h) == *eta);
                let value = match target {
                    None => C64::new(0.0, 0.0),
                    Some(j) => {
                        let key = (w2.clone(), w.clone(), j.clone());
                        let pair = table
                            .e_pairings
                            .get(&key)
                            .ok_or_else(|| Error::IncompleteTable(format!("(E[{w2}] {w}, {j})")))?;
                        let mut v = pair / table.norm(j)?;
                        if j == w && mode == BaseMode::Rational {
                            let eb = table
                                .e_at_base
                                .get(w2)
                                .ok_or_else(|| Error::IncompleteTable(format!("E[{w2}](b)")))?;
                            v -= eb;
                        }
                        v
                    }
                };
                out.push(MatrixCoefficient {
                    omega: w.clone(),
                    omega_prime: w2.clone(),
                    eta: eta.clone(),
                    value,
                });
            }
        }
    }
    Ok(out)
}

/// `ω, ω' ∈ 𝓑_e` under orthogonality of `𝓑_0` and `𝓑_e`: the coefficient
/// on `[conj(η)]^∨` is `-½ (𝓕_{ω,ω'}, η) / (η, η)` for `η ∈ 𝓑_0`; the
/// coefficients on `𝓑_e` are not covered and are omitted.
pub fn matrix_coeff_third_case(table: &InnerProductTable) -> Result<Vec<MatrixCoefficient>> {
    if !table.orth {
        return Err(Error::OrthNotDeclared);
    }
    let mut out = Vec::new();
    for w in &table.eisenstein {
        for w2 in &table.eisenstein {
            for (eta, norm_label) in table.b0_labels() {
                let value = table.f_pairing(w, w2, &eta)? * (-0.5 / table.norm(&norm_label)?);
                let dual = match eta.strip_prefix("conj(").and_then(|r| r.strip_suffix(')')) {
                    Some(h) => h.to_string(),
                    None => conj_label(&eta),
                };
                out.push(MatrixCoefficient { omega: w.clone(), omega_prime: w2.clone(), eta: dual, value });
            }
        }
    }
    Ok(out)
}
