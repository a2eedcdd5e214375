//! Infinite-Frobenius conjugation of Chen series and generalized
//! Bloch-Wigner coordinates.
//!
//! For a path `γ` from the base point `b` to `y`,
//! `I(b, y) = T(γ) · c_B(T(γ))^{-1}` with `c_B = c_dR ∘ φ∞`, and the
//! coordinates `D_h(b, y)` are the Hall coordinates of `log I(b, y)`.

use crate::iterint::{transport_with, Connection, Path, Tangential, TransportConfig};
use crate::ncalg::{hall_coordinates, Alphabet, Series, Word, NUMERIC_TOL};
use crate::{Error, Result, C64};
use std::sync::Arc;

/// Largest depth accepted by [`bw_table`].
pub const MAX_BW_DEPTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Class of a basis one-form: holomorphic, anti-holomorphic, or a lift of
/// a cokernel class on which `φ∞` acts by the given sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterClass {
    Holomorphic,
    AntiHolomorphic,
    Eisenstein(Sign),
}

impl LetterClass {
    pub fn is_b0(self) -> bool {
        !matches!(self, LetterClass::Eisenstein(_))
    }
}

/// `ℛ_ε(z) = z + ε z̄`.
pub fn signed_conj(z: C64, eps: Sign) -> C64 {
    z + z.conj() * eps.value()
}

/// Action of `φ∞` on the letters: a linear part on degree 1 and an optional
/// degree-2 raising block `φ∞^{[1,2]}`.
#[derive(Debug, Clone)]
pub struct FrobeniusSpec {
    alphabet: Arc<Alphabet>,
    classes: Vec<Option<LetterClass>>,
    /// `action[b]` = image of letter `b` as `(a, coefficient)` pairs.
    action: Vec<Option<Vec<(usize, C64)>>>,
    /// `raising[b]` = degree-2 block of `φ∞(e_b)`, dense over `k^2` words.
    raising: Vec<Option<Vec<C64>>>,
}

impl FrobeniusSpec {
    pub fn new(alphabet: &Arc<Alphabet>) -> Self {
        let k = alphabet.len();
        FrobeniusSpec {
            alphabet: alphabet.clone(),
            classes: vec![None; k],
            action: vec![None; k],
            raising: vec![None; k],
        }
    }

    /// Every letter in `𝓑_e^-`: `φ∞(e_i) = -e_i`, no raising block.
    pub fn kz(alphabet: &Arc<Alphabet>) -> Self {
        let mut s = Self::new(alphabet);
        for i in 0..alphabet.len() {
            s.classes[i] = Some(LetterClass::Eisenstein(Sign::Minus));
            s.action[i] = Some(vec![(i, C64::new(-1.0, 0.0))]);
        }
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// `φ∞(e) = ε e`.
    pub fn eisenstein(mut self, letter: &str, sign: Sign) -> Result<Self> {
        let i = self.alphabet.index_of(letter)?;
        self.classes[i] = Some(LetterClass::Eisenstein(sign));
        self.action[i] = Some(vec![(i, C64::new(sign.value(), 0.0))]);
        Ok(self)
    }

    /// `φ∞` swaps the dual classes of `ω` and `ω̄`.
    pub fn holomorphic_pair(mut self, holo: &str, anti: &str) -> Result<Self> {
        let h = self.alphabet.index_of(holo)?;
        let a = self.alphabet.index_of(anti)?;
        if h == a {
            return Err(Error::InvalidFrobenius("a conjugate pair needs two letters".into()));
        }
        let one = C64::new(1.0, 0.0);
        self.classes[h] = Some(LetterClass::Holomorphic);
        self.classes[a] = Some(LetterClass::AntiHolomorphic);
        self.action[h] = Some(vec![(a, one)]);
        self.action[a] = Some(vec![(h, one)]);
        Ok(self)
    }

    /// Arbitrary linear image on degree 1; the class is left unset.
    pub fn with_action(mut self, letter: &str, image: &[(&str, C64)]) -> Result<Self> {
        let i = self.alphabet.index_of(letter)?;
        let img = image
            .iter()
            .map(|(n, c)| Ok((self.alphabet.index_of(n)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        self.action[i] = Some(img);
        Ok(self)
    }

    pub fn with_class(mut self, letter: &str, class: LetterClass) -> Result<Self> {
        let i = self.alphabet.index_of(letter)?;
        self.classes[i] = Some(class);
        Ok(self)
    }

    /// Degree-2 block of `φ∞(e)`; only the degree-2 slice of `block` is used
    /// and it must be the only nonzero part.
    pub fn with_raising(mut self, letter: &str, block: &Series) -> Result<Self> {
        if **block.alphabet() != *self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if block.truncation() < 2 {
            return Err(Error::InvalidFrobenius("raising block needs degree 2".into()));
        }
        for d in (0..=block.truncation()).filter(|&d| d != 2) {
            if block.slice(d).iter().any(|c| c.norm() > 0.0) {
                return Err(Error::InvalidFrobenius(format!("raising block has a degree-{d} part")));
            }
        }
        let k = self.alphabet.len();
        let r = block.slice(2);
        // φ∞ maps Lie elements to Lie elements, so the block is a bracket
        for a in 0..k {
            for b in 0..=a {
                if (r[a * k + b] + r[b * k + a]).norm() > 1e-12 * (1.0 + r[a * k + b].norm()) {
                    return Err(Error::InvalidFrobenius("raising block is not a Lie element".into()));
                }
            }
        }
        let i = self.alphabet.index_of(letter)?;
        self.raising[i] = Some(r.to_vec());
        Ok(self)
    }

    pub fn class(&self, letter: usize) -> Option<LetterClass> {
        self.classes.get(letter).copied().flatten()
    }

    pub fn has_raising(&self) -> bool {
        self.raising.iter().any(|r| r.is_some())
    }

    /// Degree-2 raising block of letter `b` at word `(i, j)`.
    pub fn raising_coeff(&self, b: usize, i: usize, j: usize) -> C64 {
        let k = self.alphabet.len();
        self.raising[b].as_ref().map_or(C64::new(0.0, 0.0), |r| r[i * k + j])
    }

    /// Checks that every letter has an action and that the degree-1 part is
    /// an involution.
    pub fn validate(&self) -> Result<()> {
        let k = self.alphabet.len();
        let m = self.linear_matrix()?;
        for a in 0..k {
            for b in 0..k {
                let sq: C64 = (0..k).map(|c| m[a][c] * m[c][b]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                if (sq - want).norm() > 1e-12 {
                    return Err(Error::InvalidFrobenius("degree-1 action is not an involution".into()));
                }
            }
        }
        Ok(())
    }

    /// `m[a][b]` = coefficient of `e_a` in `φ∞(e_b)`.
    fn linear_matrix(&self) -> Result<Vec<Vec<C64>>> {
        let k = self.alphabet.len();
        let mut m = vec![vec![C64::new(0.0, 0.0); k]; k];
        for b in 0..k {
            let img = self.action[b]
                .as_ref()
                .ok_or_else(|| Error::MissingAction(self.alphabet.name(b).to_string()))?;
            for &(a, c) in img {
                m[a][b] += c;
            }
        }
        Ok(m)
    }

    fn letter_image(&self, b: usize, m: &[Vec<C64>], n: usize) -> Series {
        let k = self.alphabet.len();
        let mut s = Series::zero(&self.alphabet, n);
        for a in 0..k {
            s.slice_mut(1)[a] = m[a][b];
        }
        if n >= 2 {
            if let Some(r) = &self.raising[b] {
                s.slice_mut(2).copy_from_slice(r);
            }
        }
        s
    }
}

/// `φ∞` applied to `x` as an algebra homomorphism, truncated at `x`'s degree.
pub fn frobenius_action(x: &Series, spec: &FrobeniusSpec) -> Result<Series> {
    if **x.alphabet() != *spec.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let m = spec.linear_matrix()?;
    if spec.has_raising() {
        let n = x.truncation();
        let images: Vec<Series> = (0..spec.alphabet.len()).map(|b| spec.letter_image(b, &m, n)).collect();
        Ok(homomorphism(x, &images))
    } else {
        Ok(linear_action(x, &m))
    }
}

/// Applies `m` to every tensor factor of every homogeneous slice.
fn linear_action(x: &Series, m: &[Vec<C64>]) -> Series {
    let k = m.len();
    let mut out = x.clone();
    for d in 1..=x.truncation() {
        let mut cur = x.slice(d).to_vec();
        let mut next = vec![C64::new(0.0, 0.0); cur.len()];
        for pos in 0..d {
            let stride = k.pow((d - 1 - pos) as u32);
            next.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for (idx, &v) in cur.iter().enumerate() {
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                let b = (idx / stride) % k;
                let base = idx - b * stride;
                for (a, row) in m.iter().enumerate() {
                    let c = row[b];
                    if c != C64::new(0.0, 0.0) {
                        next[base + a * stride] += c * v;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        out.slice_mut(d).copy_from_slice(&cur);
    }
    out
}

/// `φ(x) = x_∅ + Σ_a φ(e_a) φ(∂_a x)` with `∂_a x = Σ_w x_{aw} w`.
fn homomorphism(x: &Series, images: &[Series]) -> Series {
    let n = x.truncation();
    let mut out = x.zeros_like();
    out.coeffs_mut()[0] = x.constant();
    if n == 0 {
        return out;
    }
    let k = images.len();
    for (a, img) in images.iter().enumerate() {
        let mut da = x.retruncate(n - 1);
        for d in 0..n {
            let stride = k.pow(d as u32);
            da.slice_mut(d).copy_from_slice(&x.slice(d + 1)[a * stride..(a + 1) * stride]);
        }
        if da.max_abs() == 0.0 {
            continue;
        }
        let inner = homomorphism(&da, &images.iter().map(|s| s.retruncate(n - 1)).collect::<Vec<_>>());
        out.add_assign_raw(&img.mul_raw(&inner.retruncate(n)), C64::new(1.0, 0.0));
    }
    out
}

/// `c_B(g) = φ∞(ḡ)`: conjugate every coefficient, then apply `φ∞` word-wise.
pub fn conj_b(g: &Series, spec: &FrobeniusSpec) -> Result<Series> {
    frobenius_action(&g.conj(), spec)
}

/// `I(b, y) = T(γ) · c_B(T(γ))^{-1}` for a path `γ` from `b` to `y`.
pub fn frobenius_series(conn: &Connection, spec: &FrobeniusSpec, path: &Path) -> Result<Series> {
    frobenius_series_with(conn, spec, path, &TransportConfig::default())
}

pub fn frobenius_series_with(
    conn: &Connection,
    spec: &FrobeniusSpec,
    path: &Path,
    cfg: &TransportConfig,
) -> Result<Series> {
    spec.validate()?;
    if **conn.alphabet() != *spec.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let t = transport_with(conn, path, cfg)?;
    t.mul(&conj_b(&t, spec)?.inverse()?)
}

/// Base point of a Bloch-Wigner table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasePoint {
    Point(C64),
    Tangential(Tangential),
}

impl BasePoint {
    pub fn point(&self) -> C64 {
        match self {
            BasePoint::Point(p) => *p,
            BasePoint::Tangential(t) => t.point,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BasePoint::Point(p) => format!("point:{},{}", p.re, p.im),
            BasePoint::Tangential(t) => format!(
                "tangential:{},{}:{},{}",
                t.point.re, t.point.im, t.tangent.re, t.tangent.im
            ),
        }
    }
}

const PATH_CLEARANCE: f64 = 1e-3;

/// A path from `base` to `y`: the straight segment if it keeps clear of
/// the other poles, otherwise a two-segment path through a point pushed
/// off the chord.
pub fn default_path(conn: &Connection, base: BasePoint, y: C64) -> Result<Path> {
    let start = base.point();
    let poles: Vec<C64> = conn
        .poles()
        .into_iter()
        .filter(|a| (a - start).norm() > 1e-12)
        .collect();
    if poles.iter().any(|a| (a - y).norm() <= 1e-12) {
        return Err(Error::PoleOnPath(y.to_string()));
    }
    let clear = |p: &Path| poles.iter().all(|&a| p.distance_to(a) > PATH_CLEARANCE);
    let chord = y - start;
    if chord.norm() == 0.0 {
        return Err(Error::InvalidPath("target coincides with the base point".into()));
    }
    let mut candidates = vec![Path::line(start, y)?];
    for h in [0.5, -0.5, 1.0, -1.0] {
        let mid = start + chord * C64::new(0.5, h);
        candidates.push(Path::polyline(&[start, mid, y])?);
    }
    let path = candidates
        .into_iter()
        .find(clear)
        .ok_or_else(|| Error::PoleOnPath("no default path avoids the poles".into()))?;
    match base {
        BasePoint::Point(_) => Ok(path),
        BasePoint::Tangential(t) => path.with_start(t),
    }
}

/// Hall coordinates `D_h(b, y)` up to a given depth.
#[derive(Debug, Clone)]
pub struct BWTable {
    pub y: C64,
    pub base: BasePoint,
    /// `(hall label, degree, value)` in Lyndon order.
    pub entries: Vec<(String, usize, C64)>,
}

impl BWTable {
    pub fn get(&self, label: &str) -> Option<C64> {
        self.entries.iter().find(|(l, _, _)| l == label).map(|(_, _, v)| *v)
    }

    pub fn max_abs_diff(&self, other: &BWTable) -> f64 {
        self.entries
            .iter()
            .map(|(l, _, v)| other.get(l).map_or(f64::INFINITY, |w| (v - w).norm()))
            .fold(0.0, f64::max)
    }
}

/// Rows `y_re,y_im,hall_label,value_re,value_im` with a header line.
pub fn bw_csv(tables: &[BWTable]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["y_re", "y_im", "hall_label", "value_re", "value_im"]).map_err(io)?;
    for t in tables {
        for (label, _, v) in &t.entries {
            w.write_record([
                t.y.re.to_string(),
                t.y.im.to_string(),
                label.clone(),
                v.re.to_string(),
                v.im.to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn bw_table(conn: &Connection, spec: &FrobeniusSpec, base: BasePoint, y: C64, depth: usize) -> Result<BWTable> {
    let path = default_path(conn, base, y)?;
    bw_table_along(conn, spec, &path, depth)
}

/// Bloch-Wigner table computed along an explicit path from the base point.
pub fn bw_table_along(conn: &Connection, spec: &FrobeniusSpec, path: &Path, depth: usize) -> Result<BWTable> {
    bw_table_with(conn, spec, path, depth, &TransportConfig::default())
}

pub fn bw_table_with(
    conn: &Connection,
    spec: &FrobeniusSpec,
    path: &Path,
    depth: usize,
    cfg: &TransportConfig,
) -> Result<BWTable> {
    if depth == 0 || depth > conn.truncation() || depth > MAX_BW_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "depth must lie in 1..={}",
            conn.truncation().min(MAX_BW_DEPTH)
        )));
    }
    let conn = conn.clone().with_truncation(depth);
    let i = frobenius_series_with(&conn, spec, path, cfg)?;
    let coords = hall_coordinates(&i.log()?, NUMERIC_TOL)?;
    let base = match path.start_decoration() {
        Some(t) => BasePoint::Tangential(t),
        None => BasePoint::Point(path.start_point()),
    };
    Ok(BWTable {
        y: path.end_point(),
        base,
        entries: coords.iter().map(|(h, c)| (h.label.clone(), h.degree(), c)).collect(),
    })
}

/// `D_{[ω]}`: zero on `𝓑₀`, `ℛ_{-ε(ω)}(∫_γ ω)` on `𝓑_e`.
pub fn length_one_closed_form(class: LetterClass, integral: C64) -> C64 {
    match class {
        LetterClass::Eisenstein(eps) => signed_conj(integral, eps.neg()),
        _ => C64::new(0.0, 0.0),
    }
}

/// Inputs to [`length_two_closed_form`] for the pair `(ω, ω')`, all along
/// the same path `γ` from `b` to `y`.
#[derive(Debug, Clone, Default)]
pub struct LengthTwoData {
    /// `⟨[ω]⊗[ω'], φ∞^{[1,2]} c_dR(T(γ)^{(1)})⟩`; `None` if unknown.
    pub pairing: Option<C64>,
    /// `∫ ω`.
    pub int_first: C64,
    /// `∫ ω'`.
    pub int_second: C64,
    /// `∫ ω ω'`.
    pub int_pair: C64,
    /// `∫ ω ω̄'`.
    pub int_pair_conj_second: C64,
    /// `∫ α_{ω,ω'}`.
    pub int_alpha: C64,
    /// `∫ α_{ω̄,ω̄'}` for two `𝓑₀` letters, `∫ α_{ω̄,ω'}` when `ω' ∈ 𝓑_e`.
    pub int_alpha_bar: C64,
}

/// `D_{[[ω]^∨,[ω']^∨]}(b, y)` by the length-two formula.
///
/// Rejects `(𝓑_h, 𝓑_ah)` pairs in either order, `𝓑_e × 𝓑₀` (use the swapped
/// order and antisymmetry), and unknown raising pairings except for two
/// `𝓑₀` letters of the same type, where the pairing vanishes.
pub fn length_two_closed_form(first: LetterClass, second: LetterClass, data: &LengthTwoData) -> Result<C64> {
    use LetterClass::*;
    let zero = C64::new(0.0, 0.0);
    let same_type_b0 = matches!((first, second), (Holomorphic, Holomorphic) | (AntiHolomorphic, AntiHolomorphic));
    let pairing = match data.pairing {
        Some(p) => p,
        None if same_type_b0 => zero,
        None => {
            return Err(Error::UnclassifiedCase(format!(
                "raising pairing unknown for {first:?} x {second:?}"
            )))
        }
    };
    let tail = match (first, second) {
        (Holomorphic, AntiHolomorphic) | (AntiHolomorphic, Holomorphic) => {
            return Err(Error::UnclassifiedCase("holomorphic x anti-holomorphic pair".into()))
        }
        (Eisenstein(_), Holomorphic) | (Eisenstein(_), AntiHolomorphic) => {
            return Err(Error::UnclassifiedCase("Eisenstein x B0 order; swap the letters".into()))
        }
        (Holomorphic, Holomorphic) | (AntiHolomorphic, AntiHolomorphic) => data.int_alpha - data.int_alpha_bar.conj(),
        (Eisenstein(e1), Eisenstein(e2)) => {
            signed_conj(data.int_pair, e1.times(e2).neg())
                - signed_conj(data.int_first, e1.neg()) * signed_conj(data.int_second, e2) * 0.5
        }
        (_, Eisenstein(e2)) => {
            let s = e2.value();
            data.int_pair + data.int_alpha - data.int_pair_conj_second * s - data.int_alpha_bar.conj() * s
        }
    };
    Ok(tail - pairing)
}

/// `⟨[ω_i]⊗[ω_j], φ∞^{[1,2]} c_dR(T^{(1)})⟩ = Σ_η R_η(i, j) · conj(⟨[η], T⟩)`.
pub fn raising_pairing(spec: &FrobeniusSpec, i: usize, j: usize, t: &Series) -> Result<C64> {
    if **t.alphabet() != *spec.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let k = spec.alphabet.len();
    if i >= k || j >= k {
        return Err(Error::UnknownLetter(i.max(j).to_string()));
    }
    Ok((0..k).map(|b| spec.raising_coeff(b, i, j) * t.coeff(&Word(vec![b])).conj()).sum())
}
