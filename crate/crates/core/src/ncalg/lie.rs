use super::{Alphabet, Series, Word};
use crate::{Error, Result, C64};
use std::sync::Arc;

/// Bracketing tree of a Hall element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HallTree {
    Letter(usize),
    Bracket(Box<HallTree>, Box<HallTree>),
}

impl HallTree {
    pub fn degree(&self) -> usize {
        match self {
            HallTree::Letter(_) => 1,
            HallTree::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn foliage(&self) -> Vec<usize> {
        match self {
            HallTree::Letter(i) => vec![*i],
            HallTree::Bracket(a, b) => {
                let mut v = a.foliage();
                v.extend(b.foliage());
                v
            }
        }
    }

    pub fn label(&self, alphabet: &Alphabet) -> String {
        match self {
            HallTree::Letter(i) => alphabet.name(*i).to_string(),
            HallTree::Bracket(a, b) => format!("[{},{}]", a.label(alphabet), b.label(alphabet)),
        }
    }

    /// Word expansion of the bracket polynomial, truncated at `n`.
    pub fn expand(&self, alphabet: &Arc<Alphabet>, n: usize) -> Series {
        match self {
            HallTree::Letter(i) => Series::letter(alphabet, n, *i),
            HallTree::Bracket(a, b) => {
                let x = a.expand(alphabet, n);
                let y = b.expand(alphabet, n);
                let mut out = x.mul_raw(&y);
                out.add_assign_raw(&y.mul_raw(&x), C64::new(-1.0, 0.0));
                out
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct HallElement {
    pub tree: HallTree,
    /// The Lyndon word indexing this element.
    pub word: Word,
    pub label: String,
    pub expansion: Series,
}

impl HallElement {
    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

/// Lyndon words of length `1..=max_degree` in lexicographic order (Duval).
pub fn lyndon_words(k: usize, max_degree: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || max_degree == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(Word(w.clone()));
        let m = w.len();
        while w.len() < max_degree {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|i| w[i..] > *w)
}

/// Standard bracketing: split at the longest proper Lyndon suffix.
fn standard_tree(w: &[usize]) -> HallTree {
    if w.len() == 1 {
        return HallTree::Letter(w[0]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("Lyndon word of length >= 2");
    HallTree::Bracket(Box::new(standard_tree(&w[..split])), Box::new(standard_tree(&w[split..])))
}

/// Lyndon words with standard bracketing, sorted by degree then lexicographically.
/// Expansions are truncated at `max_degree`.
pub fn lyndon_basis(alphabet: &Arc<Alphabet>, max_degree: usize) -> Vec<HallElement> {
    let mut words = lyndon_words(alphabet.len(), max_degree);
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
        .into_iter()
        .map(|w| {
            let tree = standard_tree(&w.0);
            HallElement {
                label: tree.label(alphabet),
                expansion: tree.expand(alphabet, max_degree),
                tree,
                word: w,
            }
        })
        .collect()
}

/// Left-normed bracketing `[..[[w1,w2],w3],..,wn]` applied to a degree-`d` slice.
pub fn dynkin_slice(k: usize, d: usize, x: &[C64]) -> Vec<C64> {
    if d <= 1 {
        return x.to_vec();
    }
    let pow_prev = k.pow((d - 1) as u32);
    let mut out = vec![C64::new(0.0, 0.0); x.len()];
    for a in 0..k {
        // x = sum_a x_a . a  (x_a indexed by words of length d-1)
        let xa: Vec<C64> = (0..pow_prev).map(|v| x[v * k + a]).collect();
        let pa = dynkin_slice(k, d - 1, &xa);
        for (v, &c) in pa.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            out[v * k + a] += c;
            out[a * pow_prev + v] -= c;
        }
    }
    out
}

/// Primitivity test: every slice satisfies `dynkin(x^(n)) = n x^(n)` within
/// `tol * max(1, |x|)`, and the constant term vanishes.
pub fn is_lie(x: &Series, tol: f64) -> bool {
    dynkin_residual(x) <= tol * x.max_abs().max(1.0)
}

fn dynkin_residual(x: &Series) -> f64 {
    let l = x.layout();
    let mut r = x.constant().norm();
    for d in 1..=l.n {
        let s = x.slice(d);
        let p = dynkin_slice(l.k, d, s);
        for (a, b) in p.iter().zip(s) {
            r = r.max((a - b * d as f64).norm() / d as f64);
        }
    }
    r
}

#[derive(Debug, Clone)]
pub struct HallCoordinates {
    pub entries: Vec<(HallElement, C64)>,
}

impl HallCoordinates {
    pub fn get(&self, label: &str) -> Option<C64> {
        self.entries.iter().find(|(h, _)| h.label == label).map(|(_, c)| *c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HallElement, C64)> {
        self.entries.iter().map(|(h, c)| (h, *c))
    }
}

/// Coordinates of a Lie element in the Lyndon basis of degree `<= N`.
///
/// Each bracket polynomial equals its Lyndon word plus lexicographically
/// larger words of the same degree, so the system is solved degree by
/// degree in increasing word order. Fails with `NonLie` if the residual
/// after elimination exceeds `tol * max(1, |lie|)`.
pub fn hall_coordinates(lie: &Series, tol: f64) -> Result<HallCoordinates> {
    let n = lie.truncation();
    let alphabet = lie.alphabet().clone();
    let basis = lyndon_basis(&alphabet, n);
    let mut residual = lie.clone();
    let mut entries = Vec::with_capacity(basis.len());
    for h in basis {
        let c = residual.coeff(&h.word);
        residual.add_assign_raw(&h.expansion, -c);
        entries.push((h, c));
    }
    let scale = lie.max_abs().max(1.0);
    let r = residual.max_abs();
    if r > tol * scale {
        return Err(Error::NonLie(r));
    }
    Ok(HallCoordinates { entries })
}
