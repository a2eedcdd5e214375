//! Randomized property checks shared by the `property_suite` and `acceptance`
//! test targets. Each check runs `CASES` deterministic proptest cases.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use std::sync::Arc;
use unifrob::iterint::{
    regularized_transport_with, transport, Connection, Path, RegBackend, RegConfig, Tangential, TransportConfig,
};
use unifrob::ncalg::{hall_coordinates, is_grouplike, is_lie, lyndon_basis, shuffle, Alphabet, Series, Word};
use unifrob::singleval::{
    bw_table, bw_table_along, conj_b, frobenius_action, frobenius_series, BasePoint, FrobeniusSpec, Sign,
};

pub const CASES: u32 = 200;

pub fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let cfg = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |a| w.concat(&Word(vec![a]))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn series_from(alphabet: &Arc<Alphabet>, n: usize, vals: &[(f64, f64)], constant: Option<f64>) -> Series {
    let mut s = Series::zero(alphabet, n);
    for (w, &(re, im)) in words(alphabet.len(), n).iter().zip(vals.iter().cycle()) {
        s.set(w, c(re, im)).unwrap();
    }
    if let Some(c0) = constant {
        s.set(&Word::empty(), c(c0, 0.0)).unwrap();
    }
    s
}

/// `(letters, truncation, coefficients)`.
fn series_params() -> impl Strategy<Value = (usize, usize, Vec<(f64, f64)>)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(k, n)| {
        let len = (0..=n).map(|d| k.pow(d as u32)).sum::<usize>();
        (Just(k), Just(n), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len))
    })
}

fn ensure(cond: bool, msg: String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg))
    }
}

// ---- ncalg ----

pub fn mul_associative_and_unital() -> Result<(), String> {
    run((series_params(), any::<u64>(), any::<u64>()), |((k, n, v), s1, s2)| {
        let a = Alphabet::indexed(k).unwrap();
        let rot = |s: u64| -> Vec<(f64, f64)> {
            let r = (s as usize) % v.len();
            v[r..].iter().chain(&v[..r]).copied().collect()
        };
        let x = series_from(&a, n, &v, None);
        let y = series_from(&a, n, &rot(s1), None);
        let z = series_from(&a, n, &rot(s2).iter().map(|(p, q)| (q * 0.7, -p)).collect::<Vec<_>>(), None);
        let lhs = x.mul(&y).unwrap().mul(&z).unwrap();
        let rhs = x.mul(&y.mul(&z).unwrap()).unwrap();
        let d = lhs.max_abs_diff(&rhs).unwrap();
        ensure(d < 1e-12 * (1.0 + lhs.max_abs()), format!("associativity off by {d:e}"))?;
        let one = x.unit_like();
        ensure(x.mul(&one).unwrap().max_abs_diff(&x).unwrap() == 0.0, "right unit".into())?;
        ensure(one.mul(&x).unwrap().max_abs_diff(&x).unwrap() == 0.0, "left unit".into())
    })
}

pub fn exp_log_inverse() -> Result<(), String> {
    run(series_params(), |(k, n, v)| {
        let a = Alphabet::indexed(k).unwrap();
        let x = series_from(&a, n, &v, Some(0.0));
        let back = x.exp().unwrap().log().unwrap();
        let d = back.max_abs_diff(&x).unwrap();
        ensure(d < 1e-10, format!("log(exp(x)) - x = {d:e}"))?;
        let g = series_from(&a, n, &v, Some(1.0));
        let d2 = g.log().unwrap().exp().unwrap().max_abs_diff(&g).unwrap();
        ensure(d2 < 1e-10 * (1.0 + g.max_abs()), format!("exp(log(g)) - g = {d2:e}"))
    })
}

/// Interleavings of `u` and `v` by choosing which positions come from `u`.
fn shuffle_oracle(u: &[usize], v: &[usize]) -> Vec<Vec<usize>> {
    let n = u.len() + v.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != u.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut w = Vec::with_capacity(n);
        for pos in 0..n {
            if mask >> pos & 1 == 1 {
                w.push(u[i]);
                i += 1;
            } else {
                w.push(v[j]);
                j += 1;
            }
        }
        out.push(w);
    }
    out
}

fn lie_coeffs() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (2usize..=3, 2usize..=4).prop_flat_map(|(k, n)| {
        let count = lyndon_basis(&Alphabet::indexed(k).unwrap(), n).len();
        (Just(k), Just(n), prop::collection::vec(-1.0f64..1.0, count))
    })
}

fn lie_element(k: usize, n: usize, cs: &[f64]) -> Series {
    let a = Alphabet::indexed(k).unwrap();
    let mut x = Series::zero(&a, n);
    for (h, &cf) in lyndon_basis(&a, n).iter().zip(cs) {
        x = x.add(&h.expansion.scale(c(cf, 0.0))).unwrap();
    }
    x
}

pub fn shuffle_relations() -> Result<(), String> {
    let strat = (lie_coeffs(), prop::collection::vec(0usize..3, 1..=3), prop::collection::vec(0usize..3, 1..=3));
    run(strat, |((k, n, cs), u, v)| {
        let u: Vec<usize> = u.into_iter().map(|a| a % k).collect();
        let v: Vec<usize> = v.into_iter().map(|a| a % k).take(4usize.saturating_sub(u.len()).max(1)).collect();
        let a = Alphabet::indexed(k).unwrap();
        let sh = shuffle(&a, &Word(u.clone()), &Word(v.clone())).unwrap();
        // coefficients against the interleaving oracle
        let mut want = std::collections::BTreeMap::<Vec<usize>, f64>::new();
        for w in shuffle_oracle(&u, &v) {
            *want.entry(w).or_default() += 1.0;
        }
        for (w, cf) in sh.terms() {
            ensure(want.get(&w.0).copied() == Some(cf.re) && cf.im == 0.0, format!("{w} has {cf}"))?;
        }
        ensure(sh.terms().count() == want.len(), "shuffle support differs".into())?;
        // <u ⧢ v, g> = <u, g><v, g> for g = exp(Lie)
        let g = lie_element(k, n.max(u.len() + v.len()), &cs).exp().unwrap();
        let lhs: C64 = sh.terms().map(|(w, cf)| cf * g.coeff(&w)).sum();
        let rhs = g.coeff(&Word(u.clone())) * g.coeff(&Word(v.clone()));
        ensure((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()), format!("{lhs} vs {rhs}"))
    })
}

pub fn exp_of_lie_is_grouplike() -> Result<(), String> {
    run(lie_coeffs(), |(k, n, cs)| {
        let x = lie_element(k, n, &cs);
        ensure(is_lie(&x, 1e-10), "bracket combination not Lie".into())?;
        let g = x.exp().unwrap();
        ensure(is_grouplike(&g, 1e-8), "exp of a Lie element not group-like".into())?;
        let coords = hall_coordinates(&g.log().unwrap(), 1e-8).unwrap();
        for ((_, got), want) in coords.iter().zip(&cs) {
            ensure((got - c(*want, 0.0)).norm() < 1e-10, format!("coordinate {got} vs {want}"))?;
        }
        // a degree-2 perturbation off the Lie algebra breaks group-likeness
        let mut bad = g.clone();
        let w = Word(vec![0, 0]);
        bad.set(&w, g.coeff(&w) + 0.25).unwrap();
        ensure(!is_grouplike(&bad, 1e-8), "perturbed series passed".into())
    })
}

// ---- iterint ----

/// A point of the upper half-plane kept away from `0` and `1`.
fn upper() -> impl Strategy<Value = (f64, f64)> {
    (-1.0f64..2.0, 0.15f64..1.5)
}

fn pt((x, y): (f64, f64)) -> C64 {
    c(x, y)
}

fn close(a: &Series, b: &Series, tol: f64, what: &str) -> Result<(), TestCaseError> {
    let d = a.max_abs_diff(b).unwrap();
    ensure(d < tol, format!("{what}: difference {d:e}"))
}

pub fn chen_multiplicativity() -> Result<(), String> {
    run((upper(), upper(), upper(), upper()), |(a, b, m, d)| {
        let kz = Connection::kz(3);
        let p = Path::polyline(&[pt(a), pt(m), pt(b)]).unwrap();
        let q = Path::polyline(&[pt(b), c(d.0, -d.1), pt(a)]).unwrap();
        let whole = transport(&kz, &p.then(&q).unwrap()).unwrap();
        let prod = transport(&kz, &q).unwrap().mul(&transport(&kz, &p).unwrap()).unwrap();
        close(&whole, &prod, 1e-8, "T(p then q) vs T(q)T(p)")
    })
}

pub fn transport_shuffle_relations() -> Result<(), String> {
    run((upper(), upper(), 0.05f64..0.95), |(a, b, y)| {
        let kz = Connection::kz(4);
        let t = transport(&kz, &Path::line(pt(a), pt(b)).unwrap()).unwrap();
        ensure(is_grouplike(&t, 1e-8), "ordinary transport not group-like".into())?;
        let reg = Path::line(c(y, 0.0), c(0.0, 0.0))
            .unwrap()
            .with_end(Tangential { point: c(0.0, 0.0), tangent: c(1.0, 0.0) })
            .unwrap();
        let r = transport(&kz, &reg).unwrap();
        ensure(is_grouplike(&r, 1e-8), "regularized transport not group-like".into())
    })
}

pub fn inverse_path_inverts() -> Result<(), String> {
    run((upper(), upper(), (-1.0f64..2.0, -1.5f64..-0.15)), |(a, b, m)| {
        let kz = Connection::kz(3);
        let p = Path::polyline(&[pt(a), c(m.0, m.1), pt(b)]).unwrap();
        let t = transport(&kz, &p).unwrap();
        let r = transport(&kz, &p.reverse()).unwrap();
        close(&r.mul(&t).unwrap(), &t.unit_like(), 1e-8, "T(γ^-1)T(γ)")
    })
}

pub fn homotopy_and_reparametrization() -> Result<(), String> {
    run((upper(), upper(), upper(), 0.1f64..0.9), |(a, b, m, split)| {
        let kz = Connection::kz(3);
        let (a, b) = (pt(a), pt(b));
        let straight = transport(&kz, &Path::line(a, b).unwrap()).unwrap();
        // homotopic inside the upper half-plane
        let bent = transport(&kz, &Path::polyline(&[a, pt(m), b]).unwrap()).unwrap();
        close(&straight, &bent, 1e-8, "homotopic paths")?;
        let mid = a + (b - a) * split;
        let pieces = transport(&kz, &Path::polyline(&[a, mid, b]).unwrap()).unwrap();
        close(&straight, &pieces, 1e-8, "reparametrized path")
    })
}

pub fn regularization_independent_of_ladder() -> Result<(), String> {
    run(0.05f64..0.95, |y| {
        let kz = Connection::kz(2);
        let path = Path::line(c(y, 0.0), c(0.0, 0.0))
            .unwrap()
            .with_end(Tangential { point: c(0.0, 0.0), tangent: c(1.0, 0.0) })
            .unwrap();
        let ladder = |eps: f64| TransportConfig {
            reg: RegConfig { backend: RegBackend::Richardson, eps, ..RegConfig::default() },
            ..TransportConfig::default()
        };
        let eps = RegConfig::default().eps;
        let t1 = regularized_transport_with(&kz, &path, &ladder(eps)).unwrap();
        let t2 = regularized_transport_with(&kz, &path, &ladder(eps / 2f64.sqrt())).unwrap();
        close(&t1, &t2, 1e-7, "ε and ε/√2 ladders")?;
        close(&t1, &transport(&kz, &path).unwrap(), 1e-7, "ladder vs subtraction")
    })
}

// ---- singleval ----

fn tangential_zero() -> BasePoint {
    BasePoint::Tangential(Tangential { point: c(0.0, 0.0), tangent: c(1.0, 0.0) })
}

pub fn frobenius_series_grouplike() -> Result<(), String> {
    run(upper(), |y| {
        let kz = Connection::kz(3);
        let spec = FrobeniusSpec::kz(kz.alphabet());
        let path = Path::line(c(0.0, 0.0), pt(y))
            .unwrap()
            .with_start(Tangential { point: c(0.0, 0.0), tangent: c(1.0, 0.0) })
            .unwrap();
        let i = frobenius_series(&kz, &spec, &path).unwrap();
        ensure(is_grouplike(&i, 1e-8), "I(b, y) not group-like".into())?;
        ensure(is_lie(&i.log().unwrap(), 1e-8), "log I(b, y) not Lie".into())
    })
}

pub fn single_valued_across_homotopy_classes() -> Result<(), String> {
    run((upper(), 0usize..2), |(y, around)| {
        let kz = Connection::kz(3);
        let spec = FrobeniusSpec::kz(kz.alphabet());
        let y = pt(y);
        let direct = bw_table(&kz, &spec, tangential_zero(), y, 3).unwrap();
        // loop once around 1 (or around 0 and back out) before heading to y
        let pts = if around == 0 {
            vec![c(0.0, 0.0), c(0.5, -0.5), c(1.6, -0.5), c(1.6, 0.6), y]
        } else {
            vec![c(0.0, 0.0), c(0.5, -0.4), c(-0.6, -0.4), c(-0.6, 0.7), c(0.5, 0.7), c(0.5, -0.3), c(1.6, -0.3), c(1.6, 0.8), y]
        };
        let detour = Path::polyline(&pts)
            .unwrap()
            .with_start(Tangential { point: c(0.0, 0.0), tangent: c(1.0, 0.0) })
            .unwrap();
        let other = bw_table_along(&kz, &spec, &detour, 3).unwrap();
        let d = direct.max_abs_diff(&other);
        ensure(d < 1e-6, format!("tables differ by {d:e}"))
    })
}

fn mixed_spec() -> FrobeniusSpec {
    let a = Alphabet::new(["w", "wbar", "e"]).unwrap();
    FrobeniusSpec::new(&a)
        .holomorphic_pair("w", "wbar")
        .and_then(|s| s.eisenstein("e", Sign::Plus))
        .unwrap()
}

pub fn betti_conjugation_composes_to_de_rham() -> Result<(), String> {
    let strat = (1usize..=4, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 121));
    run((strat, any::<bool>()), |((n, v), use_mixed)| {
        let spec = if use_mixed { mixed_spec() } else { FrobeniusSpec::kz(&Alphabet::indexed(2).unwrap()) };
        let g = series_from(spec.alphabet(), n, &v, None);
        let lhs = conj_b(&frobenius_action(&g, &spec).unwrap(), &spec).unwrap();
        close(&lhs, &g.conj(), 1e-12 * (1.0 + g.max_abs()), "c_B φ∞ vs c_dR")
    })
}

pub fn length_one_is_log_modulus() -> Result<(), String> {
    run(upper(), |y| {
        let kz = Connection::kz(2);
        let spec = FrobeniusSpec::kz(kz.alphabet());
        let y = pt(y);
        let t = bw_table(&kz, &spec, tangential_zero(), y, 2).unwrap();
        let e0 = t.get("e0").unwrap();
        let e1 = t.get("e1").unwrap();
        ensure((e0 - c(2.0 * y.norm().ln(), 0.0)).norm() < 1e-8, format!("D_e0 = {e0}"))?;
        ensure((e1 - c(2.0 * (y - 1.0).norm().ln(), 0.0)).norm() < 1e-8, format!("D_e1 = {e1}"))
    })
}

/// Every property with its name, in the order reported by the acceptance run.
pub fn all() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("mul_associative_and_unital", mul_associative_and_unital),
        ("exp_log_inverse", exp_log_inverse),
        ("shuffle_relations", shuffle_relations),
        ("exp_of_lie_is_grouplike", exp_of_lie_is_grouplike),
        ("chen_multiplicativity", chen_multiplicativity),
        ("transport_shuffle_relations", transport_shuffle_relations),
        ("inverse_path_inverts", inverse_path_inverts),
        ("homotopy_and_reparametrization", homotopy_and_reparametrization),
        ("regularization_independent_of_ladder", regularization_independent_of_ladder),
        ("frobenius_series_grouplike", frobenius_series_grouplike),
        ("single_valued_across_homotopy_classes", single_valued_across_homotopy_classes),
        ("betti_conjugation_composes_to_de_rham", betti_conjugation_composes_to_de_rham),
        ("length_one_is_log_modulus", length_one_is_log_modulus),
    ]
}
