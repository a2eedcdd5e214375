//! Line format: `word<TAB>re<TAB>im`, letters joined by `.`, empty word `1`.
//! Two header lines record the alphabet and truncation:
//! `#alphabet<TAB>e0<TAB>e1` and `#truncation<TAB>N`.

use super::{Alphabet, Series};
use crate::{Error, Result, C64};
use std::fmt::Write as _;

/// Writes nonzero coefficients in storage order (by degree, then lexicographic).
pub fn write_series(s: &Series) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#alphabet\t{}", s.alphabet().letters().join("\t"));
    let _ = writeln!(out, "#truncation\t{}", s.truncation());
    for (w, c) in s.terms() {
        let _ = writeln!(out, "{}\t{:.17e}\t{:.17e}", s.alphabet().format_word(&w), c.re, c.im);
    }
    out
}

/// Parses the line format. Header lines are required unless `fallback`
/// supplies the alphabet and truncation.
pub fn parse_series(text: &str, fallback: Option<(&std::sync::Arc<Alphabet>, usize)>) -> Result<Series> {
    let mut alphabet = fallback.map(|(a, _)| a.clone());
    let mut truncation = fallback.map(|(_, n)| n);
    let mut body = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#alphabet") {
            alphabet = Some(Alphabet::new(rest.split('\t').map(str::trim).filter(|x| !x.is_empty()))?);
        } else if let Some(rest) = line.strip_prefix("#truncation") {
            truncation = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad truncation", lineno + 1)))?,
            );
        } else if line.starts_with('#') {
            continue;
        } else {
            body.push((lineno + 1, line));
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::Parse("missing #alphabet header".into()))?;
    let n = truncation.ok_or_else(|| Error::Parse("missing #truncation header".into()))?;
    let mut s = Series::zero(&alphabet, n);
    for (lineno, line) in body {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {lineno}: expected 3 tab-separated fields")));
        }
        let w = alphabet.parse_word(fields[0])?;
        let num = |f: &str| {
            f.trim().parse::<f64>().map_err(|_| Error::Parse(format!("line {lineno}: bad number `{f}`")))
        };
        s.set(&w, C64::new(num(fields[1])?, num(fields[2])?))?;
    }
    Ok(s)
}
