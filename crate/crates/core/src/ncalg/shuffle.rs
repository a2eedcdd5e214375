use super::{is_lie, Alphabet, Series, Word};
use crate::{Error, Result, C64};
use std::sync::Arc;

/// All shuffles of `u` and `v`, listed with multiplicity.
pub fn shuffle_words(u: &Word, v: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    fn rec(u: &[usize], v: &[usize], buf: &mut Vec<usize>, out: &mut Vec<Word>) {
        if u.is_empty() && v.is_empty() {
            out.push(Word(buf.clone()));
            return;
        }
        if let Some((&a, rest)) = u.split_first() {
            buf.push(a);
            rec(rest, v, buf, out);
            buf.pop();
        }
        if let Some((&b, rest)) = v.split_first() {
            buf.push(b);
            rec(u, rest, buf, out);
            buf.pop();
        }
    }
    rec(&u.0, &v.0, &mut buf, &mut out);
    out
}

/// The shuffle product `u ⧢ v` as a series truncated at `|u| + |v|`.
pub fn shuffle(alphabet: &Arc<Alphabet>, u: &Word, v: &Word) -> Result<Series> {
    let k = alphabet.len();
    if let Some(&bad) = u.0.iter().chain(&v.0).find(|&&a| a >= k) {
        return Err(Error::UnknownLetter(bad.to_string()));
    }
    let mut s = Series::zero(alphabet, u.len() + v.len());
    for w in shuffle_words(u, v) {
        let i = s.layout().index(&w.0);
        s.coeffs_mut()[i] += 1.0;
    }
    Ok(s)
}

/// Word pairs beyond this count are checked through the equivalent
/// primitivity test of `log g`.
const MAX_SHUFFLE_PAIRS: usize = 2_000_000;

/// Tests `<u ⧢ v, g> = <u, g><v, g>` for all nonempty words with
/// `|u| + |v| <= N`, each within `tol * (1 + |<u,g>||<v,g>|)`.
///
/// For large alphabets the pairwise test is replaced by the Dynkin test on
/// `log g`, which is equivalent for series with constant term 1.
pub fn is_grouplike(g: &Series, tol: f64) -> bool {
    if (g.constant() - 1.0).norm() > tol {
        return false;
    }
    let l = g.layout().clone();
    let n = l.n;
    if n < 2 {
        return true;
    }
    let words_below = l.off[n] - 1;
    if words_below * words_below / 2 > MAX_SHUFFLE_PAIRS {
        return match g.log() {
            Ok(x) => is_lie(&x, tol),
            Err(_) => false,
        };
    }
    let coeffs = g.coeffs();
    for du in 1..n {
        for dv in du..=(n - du) {
            for iu in 0..l.pow[du] {
                let u = Word(l.digits(iu, du));
                let gu = coeffs[l.off[du] + iu];
                let start = if du == dv { iu } else { 0 };
                for iv in start..l.pow[dv] {
                    let v = Word(l.digits(iv, dv));
                    let gv = coeffs[l.off[dv] + iv];
                    let lhs: C64 = shuffle_words(&u, &v).iter().map(|w| coeffs[l.index(&w.0)]).sum();
                    let rhs = gu * gv;
                    if (lhs - rhs).norm() > tol * (1.0 + rhs.norm()) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_letters() {
        let a = Alphabet::indexed(2).unwrap();
        let s = shuffle(&a, &Word(vec![0]), &Word(vec![1])).unwrap();
        assert_eq!(s.coeff(&Word(vec![0, 1])), C64::new(1.0, 0.0));
        assert_eq!(s.coeff(&Word(vec![1, 0])), C64::new(1.0, 0.0));
        assert_eq!(s.terms().count(), 2);
    }

    #[test]
    fn empty_word_is_unit() {
        let a = Alphabet::indexed(2).unwrap();
        let v = Word(vec![1, 0, 0]);
        let s = shuffle(&a, &Word::empty(), &v).unwrap();
        assert_eq!(s.terms().collect::<Vec<_>>(), vec![(v, C64::new(1.0, 0.0))]);
    }

    #[test]
    fn repeated_letters_counted_with_multiplicity() {
        let words = shuffle_words(&Word(vec![0, 0]), &Word(vec![0]));
        assert_eq!(words.len(), 3);
        assert!(words.iter().all(|w| w.0 == vec![0, 0, 0]));
    }

    #[test]
    fn grouplike_examples() {
        let a = Alphabet::indexed(2).unwrap();
        let one = Series::unit(&a, 2);
        assert!(is_grouplike(&one, 1e-12));
        let mut g = one.clone();
        g.set(&Word(vec![0, 1]), C64::new(1.0, 0.0)).unwrap();
        assert!(!is_grouplike(&g, 0.5));
        let x = Series::letter(&a, 2, 0).scale(C64::new(0.5, 1.0));
        assert!(is_grouplike(&x.exp().unwrap(), 1e-12));
    }
}
