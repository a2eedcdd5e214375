//! Truncated noncommutative power series over the complex numbers.
//!
//! Coefficients are stored densely: words of length `d` occupy a block of
//! `k^d` slots, ordered by their base-`k` value with the first letter most
//! significant. Within a degree this is the lexicographic order induced by
//! the alphabet order.

mod io;
mod lie;
mod shuffle;

pub use io::{parse_series, write_series};
pub use lie::{
    dynkin_slice, hall_coordinates, is_lie, lyndon_basis, lyndon_words, HallCoordinates,
    HallElement, HallTree,
};
pub use shuffle::{is_grouplike, shuffle, shuffle_words};

use crate::{Error, Result, C64};
use std::fmt;
use std::sync::Arc;

pub const ALGEBRAIC_TOL: f64 = 1e-10;
pub const NUMERIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("empty".into()));
        }
        for (i, a) in letters.iter().enumerate() {
            if a.is_empty() || a.contains(['.', '\t', '\n']) || a == "1" {
                return Err(Error::InvalidAlphabet(format!("bad letter name `{a}`")));
            }
            if letters[..i].contains(a) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{a}`")));
            }
        }
        Ok(Arc::new(Alphabet { letters }))
    }

    /// Letters `e0, e1, ..., e{k-1}`.
    pub fn indexed(k: usize) -> Result<Arc<Self>> {
        Self::new((0..k).map(|i| format!("e{i}")))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.letters
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    /// Parses a `.`-joined word; `1` and the empty string denote the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        s.split('.').map(|p| self.index_of(p)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.0.iter().map(|&i| self.letters[i].as_str()).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Layout of the dense coefficient vector for a given alphabet size and truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Layout {
    pub k: usize,
    pub n: usize,
    pub pow: Vec<usize>,
    pub off: Vec<usize>,
}

impl Layout {
    pub fn new(k: usize, n: usize) -> Self {
        let mut pow = vec![1usize; n + 2];
        let mut off = vec![0usize; n + 2];
        for d in 1..n + 2 {
            pow[d] = pow[d - 1] * k;
            off[d] = off[d - 1] + pow[d - 1];
        }
        Layout { k, n, pow, off }
    }

    pub fn total(&self) -> usize {
        self.off[self.n + 1]
    }

    pub fn value(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &a| acc * self.k + a)
    }

    pub fn index(&self, w: &[usize]) -> usize {
        self.off[w.len()] + self.value(w)
    }

    pub fn word_at(&self, idx: usize) -> Word {
        let mut d = 0;
        while self.off[d + 1] <= idx {
            d += 1;
        }
        Word(self.digits(idx - self.off[d], d))
    }

    pub fn digits(&self, mut v: usize, d: usize) -> Vec<usize> {
        let mut out = vec![0; d];
        for slot in out.iter_mut().rev() {
            *slot = v % self.k;
            v /= self.k;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    alphabet: Arc<Alphabet>,
    layout: Arc<Layout>,
    coeffs: Vec<C64>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.layout.n == other.layout.n
            && self.coeffs == other.coeffs
    }
}

impl Series {
    pub fn zero(alphabet: &Arc<Alphabet>, n: usize) -> Self {
        let layout = Arc::new(Layout::new(alphabet.len(), n));
        let coeffs = vec![C64::new(0.0, 0.0); layout.total()];
        Series { alphabet: alphabet.clone(), layout, coeffs }
    }

    pub fn unit(alphabet: &Arc<Alphabet>, n: usize) -> Self {
        let mut s = Self::zero(alphabet, n);
        s.coeffs[0] = C64::new(1.0, 0.0);
        s
    }

    pub fn letter(alphabet: &Arc<Alphabet>, n: usize, i: usize) -> Self {
        Self::monomial(alphabet, n, &Word(vec![i]), C64::new(1.0, 0.0))
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, n: usize, w: &Word, c: C64) -> Self {
        let mut s = Self::zero(alphabet, n);
        if w.len() <= n {
            let i = s.layout.index(&w.0);
            s.coeffs[i] = c;
        }
        s
    }

    /// Zero series with the same alphabet and truncation as `self`.
    pub fn zeros_like(&self) -> Self {
        Series {
            alphabet: self.alphabet.clone(),
            layout: self.layout.clone(),
            coeffs: vec![C64::new(0.0, 0.0); self.coeffs.len()],
        }
    }

    pub fn unit_like(&self) -> Self {
        let mut s = self.zeros_like();
        s.coeffs[0] = C64::new(1.0, 0.0);
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.layout.n
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        if w.len() > self.layout.n {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[self.layout.index(&w.0)]
    }

    /// Coefficient of a word given by letter names, e.g. `["e0", "e1"]`.
    pub fn coeff_named(&self, letters: &[&str]) -> Result<C64> {
        let w = letters.iter().map(|l| self.alphabet.index_of(l)).collect::<Result<Vec<_>>>()?;
        Ok(self.coeff(&Word(w)))
    }

    pub fn set(&mut self, w: &Word, c: C64) -> Result<()> {
        if w.len() > self.layout.n {
            return Err(Error::TruncationMismatch(w.len(), self.layout.n));
        }
        if w.0.iter().any(|&a| a >= self.alphabet.len()) {
            return Err(Error::UnknownLetter(w.to_string()));
        }
        let i = self.layout.index(&w.0);
        self.coeffs[i] = c;
        Ok(())
    }

    pub fn constant(&self) -> C64 {
        self.coeffs[0]
    }

    /// Coefficients of the degree-`d` slice, in lexicographic word order.
    pub fn slice(&self, d: usize) -> &[C64] {
        &self.coeffs[self.layout.off[d]..self.layout.off[d + 1]]
    }

    pub(crate) fn slice_mut(&mut self, d: usize) -> &mut [C64] {
        let (a, b) = (self.layout.off[d], self.layout.off[d + 1]);
        &mut self.coeffs[a..b]
    }

    /// The homogeneous component `x^(d)` as a series.
    pub fn degree_part(&self, d: usize) -> Series {
        let mut s = self.zeros_like();
        if d <= self.layout.n {
            s.slice_mut(d).copy_from_slice(self.slice(d));
        }
        s
    }

    /// Nonzero terms as (word, coefficient), in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (Word, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(move |(i, &c)| (self.layout.word_at(i), c))
    }

    /// Same coefficients viewed at a different truncation (dropping or zero-padding).
    pub fn retruncate(&self, n: usize) -> Series {
        let mut s = Series::zero(&self.alphabet, n);
        let m = n.min(self.layout.n);
        let len = self.layout.off[m + 1];
        s.coeffs[..len].copy_from_slice(&self.coeffs[..len]);
        s
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if self.layout.n != other.layout.n {
            return Err(Error::TruncationMismatch(self.layout.n, other.layout.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_raw(other, C64::new(1.0, 0.0));
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_raw(other, C64::new(-1.0, 0.0));
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> Series {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|x| *x *= c);
        out
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Series {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|x| *x = x.conj());
        out
    }

    /// `self += c * other` without compatibility checks.
    pub(crate) fn add_assign_raw(&mut self, other: &Series, c: C64) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &Series) -> Series {
        let mut out = self.zeros_like();
        mul_into(&self.layout, &self.coeffs, &other.coeffs, &mut out.coeffs, 0);
        out
    }

    pub fn exp(&self) -> Result<Series> {
        let c = self.constant();
        if c.norm() != 0.0 {
            return Err(Error::ConstantTerm { expected: 0.0, found: c.to_string() });
        }
        Ok(self.exp_raw())
    }

    pub(crate) fn exp_raw(&self) -> Series {
        // Horner: 1 + x/1 (1 + x/2 (1 + ... (1 + x/N)))
        let n = self.layout.n;
        let mut acc = self.unit_like();
        for m in (1..=n).rev() {
            let mut t = self.mul_raw(&acc);
            t.coeffs.iter_mut().for_each(|x| *x /= m as f64);
            t.coeffs[0] += 1.0;
            acc = t;
        }
        acc
    }

    pub fn log(&self) -> Result<Series> {
        self.check_unit_constant()?;
        let n = self.layout.n;
        let mut y = self.clone();
        y.coeffs[0] = C64::new(0.0, 0.0);
        // y - y^2/2 + y^3/3 - ... via Horner on y (c_1 + y (c_2 + ...))
        let mut acc = self.zeros_like();
        for m in (1..=n).rev() {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            acc.coeffs[0] += sign / m as f64;
            acc = y.mul_raw(&acc);
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Series> {
        self.check_unit_constant()?;
        let mut y = self.clone();
        y.coeffs[0] = C64::new(0.0, 0.0);
        let mut acc = self.unit_like();
        for _ in 0..self.layout.n {
            let mut t = y.mul_raw(&acc);
            t.coeffs.iter_mut().for_each(|x| *x = -*x);
            t.coeffs[0] += 1.0;
            acc = t;
        }
        Ok(acc)
    }

    fn check_unit_constant(&self) -> Result<()> {
        let c = self.constant();
        if (c - 1.0).norm() > ALGEBRAIC_TOL {
            return Err(Error::ConstantTerm { expected: 1.0, found: c.to_string() });
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Series) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.max_abs_diff_raw(other))
    }

    pub(crate) fn max_abs_diff_raw(&self, other: &Series) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `out[deg >= min_out] += a * b`, truncated at the layout degree.
pub(crate) fn mul_into(l: &Layout, a: &[C64], b: &[C64], out: &mut [C64], min_out: usize) {
    let n = l.n;
    for da in 0..=n {
        let ablk = &a[l.off[da]..l.off[da + 1]];
        for db in 0..=(n - da) {
            if da + db < min_out {
                continue;
            }
            let bblk = &b[l.off[db]..l.off[db + 1]];
            let base = l.off[da + db];
            let stride = l.pow[db];
            for (i, &ai) in ablk.iter().enumerate() {
                if ai.re == 0.0 && ai.im == 0.0 {
                    continue;
                }
                let o = &mut out[base + i * stride..base + (i + 1) * stride];
                for (oj, &bj) in o.iter_mut().zip(bblk) {
                    *oj += ai * bj;
                }
            }
        }
    }
}
