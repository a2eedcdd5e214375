//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use unifrob::iterint::{OneForm, Path, Segment};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `Li_2(y) = Σ y^n / n^2` summed directly; valid for `|y| <= 1`.
pub fn li2_series(y: C64, terms: usize) -> C64 {
    let mut pow = y;
    let mut s = C64::new(0.0, 0.0);
    // summed from the small end for accuracy
    let mut tail = Vec::with_capacity(terms);
    for n in 1..=terms {
        tail.push(pow / (n as f64 * n as f64));
        pow *= y;
        if pow.norm() < 1e-300 {
            break;
        }
    }
    for t in tail.iter().rev() {
        s += t;
    }
    s
}

/// `D(y) = Im Li_2(y) + log|y| arg(1 - y)`.
pub fn bloch_wigner(y: C64) -> f64 {
    li2_series(y, 1_000_000).im + y.norm().ln() * (C64::new(1.0, 0.0) - y).arg()
}

/// Gauss-Legendre rule on `[0, 1]` by Newton iteration on Legendre polynomials.
pub fn gl01(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..60 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            z -= p1 / dp;
        }
        out.push((0.5 * (1.0 - z), 1.0 / ((1.0 - z * z) * dp * dp)));
    }
    out
}

fn pull(f: &OneForm, seg: &Segment, s: f64) -> C64 {
    let v = f.coeff_at(seg.point(s)) * seg.velocity(s);
    if f.conjugate {
        v.conj()
    } else {
        v
    }
}

/// Nested simplex quadrature of `∫ ω1 ⋯ ωn` (`n <= 3`, `ω1` latest) on a
/// path, built from per-segment nested Gauss rules and Chen's formula for
/// the concatenation.
pub fn simplex_iterated(forms: &[OneForm], path: &Path, m: usize) -> C64 {
    assert!(forms.len() <= 3);
    let n = forms.len();
    // running[i][j] = ∫ over the path so far of ω_i ⋯ ω_j (word slice i..j)
    let mut run = vec![vec![C64::new(0.0, 0.0); n + 1]; n + 1];
    for i in 0..=n {
        run[i][i] = C64::new(1.0, 0.0);
    }
    let rule = gl01(m);
    for seg in path.segments() {
        let local = segment_table(forms, seg, &rule);
        let mut next = vec![vec![C64::new(0.0, 0.0); n + 1]; n + 1];
        for i in 0..=n {
            for j in i..=n {
                // later segment carries the earlier letters of the word
                let mut acc = C64::new(0.0, 0.0);
                for k in i..=j {
                    acc += local[i][k] * run[k][j];
                }
                next[i][j] = acc;
            }
        }
        run = next;
    }
    run[0][n]
}

/// `tab[i][j]` = `∫_seg ω_i ⋯ ω_{j-1}` by nested quadrature over the simplex.
fn segment_table(forms: &[OneForm], seg: &Segment, rule: &[(f64, f64)]) -> Vec<Vec<C64>> {
    let n = forms.len();
    let mut tab = vec![vec![C64::new(0.0, 0.0); n + 1]; n + 1];
    for i in 0..=n {
        tab[i][i] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        for j in (i + 1)..=n {
            tab[i][j] = nested(&forms[i..j], seg, 0.0, 1.0, rule);
        }
    }
    tab
}

/// `∫_{lo < s_k < ... < s_1 < hi} Π pull(ω_i, s_i)` with `ω_1` at the largest time.
fn nested(forms: &[OneForm], seg: &Segment, lo: f64, hi: f64, rule: &[(f64, f64)]) -> C64 {
    if forms.is_empty() {
        return C64::new(1.0, 0.0);
    }
    let mut acc = C64::new(0.0, 0.0);
    // composite: split [lo, hi] into panels for accuracy
    let panels = 8;
    for p in 0..panels {
        let a = lo + (hi - lo) * p as f64 / panels as f64;
        let b = lo + (hi - lo) * (p + 1) as f64 / panels as f64;
        for &(x, w) in rule {
            let s = a + (b - a) * x;
            let inner = nested(&forms[1..], seg, lo, s, rule);
            acc += pull(&forms[0], seg, s) * inner * (w * (b - a));
        }
    }
    acc
}

/// The 11a eigenvalue fixture with its local-representation sidecar.
pub fn load_11a() -> unifrob::automorphic::EigenformData {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let csv = std::fs::read_to_string(format!("{dir}/11a.csv")).expect("11a.csv");
    let side = std::fs::read_to_string(format!("{dir}/11a.local.json")).expect("11a.local.json");
    let recs = unifrob::automorphic::parse_local_sidecar(&side).expect("sidecar");
    unifrob::automorphic::EigenformData::from_csv(&csv, 11, "11a")
        .and_then(|f| f.with_locals(&recs))
        .expect("11a data")
}

/// `a_p = p - #{(x, y) ∈ F_p^2 : y^2 + y = x^3 - x^2 - 10x - 20}`, counting
/// roots of `y^2 + y = v` from a table of all values of `y^2 + y`.
pub fn ap_11a_by_table(p: i64) -> i64 {
    let mut hits = vec![0i64; p as usize];
    for y in 0..p {
        hits[((y * y + y) % p) as usize] += 1;
    }
    let mut count = 0;
    for x in 0..p {
        let v = (x * x % p * x - x * x - 10 * x - 20).rem_euclid(p);
        count += hits[v as usize];
    }
    p - count
}

/// Dirichlet coefficients `c(n)`, `n <= n_max`, of
/// `Π_p (1 - X^2) / ((1 - α²X)(1 - X)²(1 - α'²X))` at `X = p^{-s}` for `p ∤ 11`
/// and `Σ_k 11^{-k} X^k` at 11, expanded prime by prime.
pub fn rankin_euler_coefficients(a: &[f64], n_max: usize) -> Vec<f64> {
    let mut c = vec![0.0; n_max + 1];
    c[1] = 1.0;
    for p in 2..=n_max {
        if (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            continue;
        }
        let mut local = vec![1.0];
        let mut pk = p;
        while pk <= n_max {
            local.push(0.0);
            pk *= p;
        }
        let kmax = local.len() - 1;
        if p == 11 {
            for k in 1..=kmax {
                local[k] = 11f64.powi(-(k as i32));
            }
        } else {
            // denominator (1 - tX + X^2)(1 - 2X + X^2) with t = α² + α'²
            let t = a[p] * a[p] / p as f64 - 2.0;
            let q1 = [1.0, -t, 1.0];
            let q2 = [1.0, -2.0, 1.0];
            let mut den = vec![0.0; 5];
            for i in 0..3 {
                for j in 0..3 {
                    den[i + j] += q1[i] * q2[j];
                }
            }
            let mut inv = vec![0.0; kmax + 1];
            inv[0] = 1.0;
            for k in 1..=kmax {
                let mut acc = 0.0;
                for j in 1..=k.min(4) {
                    acc -= den[j] * inv[k - j];
                }
                inv[k] = acc;
            }
            for k in 0..=kmax {
                local[k] = inv[k] - if k >= 2 { inv[k - 2] } else { 0.0 };
            }
        }
        let mut next = vec![0.0; n_max + 1];
        for n in 1..=n_max {
            if c[n] == 0.0 || n % p == 0 {
                continue;
            }
            let mut m = n;
            for &l in &local {
                if m > n_max {
                    break;
                }
                next[m] += c[n] * l;
                m *= p;
            }
        }
        c = next;
    }
    c
}

/// `K_{3/2}(z) = √(π/2z) e^{-z} (1 + 1/z)`.
pub fn bessel_k_three_halves(z: f64) -> f64 {
    (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() * (1.0 + 1.0 / z)
}

/// Fourier expansion of `Σ_{(m,n)≠0} y^2/|mτ+n|^4`.
pub fn lattice_sum_s2_fourier(tau: C64) -> f64 {
    use std::f64::consts::PI;
    let (x, y) = (tau.re, tau.im);
    let zeta3 = 1.202_056_903_159_594_3;
    let zeta4 = PI.powi(4) / 90.0;
    let mut acc = 2.0 * zeta4 * y * y + PI * zeta3 / y;
    for n in 1..200u64 {
        let sigma: f64 = (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(-3)).sum();
        let z = 2.0 * PI * n as f64 * y;
        let term = 8.0 * PI * PI * y.sqrt() * (n as f64).powf(1.5) * sigma * bessel_k_three_halves(z)
            * (2.0 * PI * n as f64 * x).cos();
        acc += term;
        if z > 60.0 {
            break;
        }
    }
    acc
}
