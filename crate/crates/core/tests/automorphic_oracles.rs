mod common;

use common::{ap_11a_by_table, c, lattice_sum_s2_fourier, load_11a, rankin_euler_coefficients};
use unifrob::automorphic::{
    cusp_zero, eigenvalues_from_primes, gamma0_index, lattice_sum, partial_l, petersson, rankin_dirichlet,
    rankin_residue, zeta_partial, EigenformData, EisensteinEvaluator, PeterssonConfig, QExpansion, DEFAULT_DELTAS,
};
use unifrob::specfun::primes_up_to;
use unifrob::C64;

#[test]
fn fixture_matches_point_counts() {
    let f = load_11a();
    assert_eq!(f.n_max(), 100_000);
    for p in primes_up_to(3000) {
        assert_eq!(f.a(p).unwrap(), ap_11a_by_table(p as i64) as f64, "p = {p}");
    }
    for (p, ap) in [(2, -2.0), (3, -1.0), (5, 1.0), (7, -2.0), (11, 1.0)] {
        assert_eq!(f.a(p).unwrap(), ap);
    }
}

#[test]
fn dirichlet_coefficients_match_euler_expansion() {
    let f = load_11a();
    let c = rankin_euler_coefficients(f.coefficients(), 1000);
    for n in 1..=1000 {
        let a = f.a(n).unwrap();
        let want = a * a / n as f64;
        assert!((c[n] - want).abs() < 1e-9 * (1.0 + want.abs()), "n = {n}: {} vs {want}", c[n]);
    }
}

fn rankin_relative_error(f: &EigenformData, s: f64) -> f64 {
    let s = c(s, 0.0);
    let lhs = rankin_dirichlet(f, f, s, 100_000).unwrap().value;
    let l = partial_l(f, f, s, 100_000).unwrap().value;
    let rhs = l / zeta_partial(11, s * 2.0) / (1.0 - 11f64.powf(-s.re - 1.0));
    ((lhs - rhs) / rhs).norm()
}

#[test]
fn rankin_selberg_identity() {
    let f = load_11a();
    assert!(rankin_relative_error(&f, 2.0) < 1e-4);
    assert!(rankin_relative_error(&f, 3.0) < 1e-6);
}

#[test]
fn partial_l_truncation_ladder() {
    let f = load_11a();
    let s = c(2.0, 0.0);
    let a = partial_l(&f, &f, s, 10_000).unwrap();
    let b = partial_l(&f, &f, s, 100_000).unwrap();
    let change = ((b.value - a.value) / b.value).norm();
    // the factors between the two cutoffs contribute Σ a_p^2 p^{-3} to the log
    let omitted: f64 = primes_up_to(100_000)
        .into_iter()
        .filter(|&p| p > 10_000)
        .map(|p| f.a(p).unwrap().powi(2) / (p as f64).powi(3))
        .sum();
    println!("relative change {change:e}, omitted log mass {omitted:e}");
    assert!((change - omitted).abs() < 1e-3 * omitted);
    assert!(change <= a.tail / a.value.norm());
}

#[test]
fn partial_l_stable_and_real() {
    let f = load_11a();
    let s = c(3.0, 0.0);
    let a = partial_l(&f, &f, s, 10_000).unwrap();
    let b = partial_l(&f, &f, s, 100_000).unwrap();
    assert!(((a.value - b.value) / b.value).norm() < 1e-6);
    assert!(b.value.im.abs() < 1e-14 * b.value.re.abs());
    assert!(b.tail < a.tail);
    let off = partial_l(&f, &f, c(2.5, 0.7), 10_000).unwrap().value;
    let mirror = partial_l(&f, &f, c(2.5, -0.7), 10_000).unwrap().value;
    assert!((off - mirror.conj()).norm() < 1e-12);
}

#[test]
fn vanishing_eigenvalues_give_zeta_square() {
    let a = eigenvalues_from_primes(11, 2000, |_| 0.0);
    let f = EigenformData::new(11, a, "zero").unwrap();
    let got = partial_l(&f, &f, c(2.0, 0.0), 2000).unwrap().value.re;
    let want: f64 = primes_up_to(2000)
        .into_iter()
        .filter(|&p| p != 11)
        .map(|p| (1.0 - (p as f64).powi(-4)).powi(-2))
        .product();
    assert!((got - want).abs() < 1e-12);
}

#[test]
fn dirichlet_partial_sums() {
    let f = load_11a();
    assert_eq!(rankin_dirichlet(&f, &f, c(2.0, 0.0), 1).unwrap().value, c(1.0, 0.0));
    let tails: Vec<f64> =
        [1000, 10_000, 100_000].iter().map(|&n| rankin_dirichlet(&f, &f, c(2.0, 0.0), n).unwrap().tail).collect();
    assert!(tails.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn lattice_sum_matches_fourier_expansion() {
    let s = c(2.0, 0.0);
    for tau in [c(0.0, 1.0), c(0.3, 1.2), c(-0.45, 0.9), c(0.1, 2.5), c(2.3, 0.05)] {
        let got = lattice_sum(tau, s, 200.0);
        let want = lattice_sum_s2_fourier(unifrob::automorphic::reduce_to_fundamental(tau));
        assert!((got.re - want).abs() < 1e-7 * want && got.im.abs() < 1e-12, "{tau}: {got} vs {want}");
    }
}

fn apply(g: [i64; 4], t: C64) -> C64 {
    (t * g[0] as f64 + g[1] as f64) / (t * g[2] as f64 + g[3] as f64)
}

#[test]
fn eisenstein_invariance_under_gamma0_11() {
    let ev = EisensteinEvaluator::new(11, cusp_zero(11)).unwrap();
    let s = c(2.0, 0.0);
    let gens = [[1, 1, 0, 1], [-1, 0, 0, -1], [7, -2, 11, -3], [8, -3, 11, -4]];
    for tau in [c(0.1, 0.8), c(-0.3, 0.2), c(0.27, 0.05), c(0.5, 1.7), c(-0.08, 0.12)] {
        let e0 = ev.eval(tau, s).unwrap();
        for g in gens {
            let e1 = ev.eval(apply(g, tau), s).unwrap();
            assert!((e1 - e0).norm() < 1e-6, "{tau} {g:?}: {e0} vs {e1}");
        }
    }
}

#[test]
fn eisenstein_is_laplace_eigenfunction() {
    let ev = EisensteinEvaluator::new(11, cusp_zero(11)).unwrap();
    let s = c(2.0, 0.0);
    for tau in [c(0.2, 0.9), c(-0.1, 0.4), c(0.31, 1.6)] {
        let h = 0.02 * tau.im;
        let e = |t: C64| ev.eval(t, s).unwrap();
        let f0 = e(tau);
        // fourth-order central differences
        let second = |d: C64| (-e(tau + d * 2.0) + e(tau + d) * 16.0 - f0 * 30.0 + e(tau - d) * 16.0 - e(tau - d * 2.0)) / 12.0;
        let lap = (second(c(h, 0.0)) + second(c(0.0, h))) / (h * h);
        let got = lap * tau.im * tau.im;
        let want = f0 * (s * (s - 1.0));
        assert!((got - want).norm() < 1e-3 * want.norm().max(1.0), "{tau}: {got} vs {want}");
    }
}

#[test]
fn eisenstein_radius_doubling() {
    let s = c(2.0, 0.0);
    let a = EisensteinEvaluator::with_radius(11, cusp_zero(11), 200.0).unwrap();
    let b = EisensteinEvaluator::with_radius(11, cusp_zero(11), 400.0).unwrap();
    for tau in [c(0.0, 1.0), c(0.3, 1.5), c(-0.2, 3.0)] {
        let d = (a.eval(tau, s).unwrap() - b.eval(tau, s).unwrap()).norm();
        assert!(d < 1e-6, "{tau}: {d:e}");
    }
}

#[test]
fn petersson_positive_hermitian_and_converged() {
    let f = load_11a();
    let qf = QExpansion::from_eigenform(&f);
    let cfg = PeterssonConfig::default();
    let ff = petersson(&qf, &qf, 11, &cfg).unwrap();
    assert!(ff.re > 0.0 && ff.im.abs() < 1e-12 * ff.re, "{ff}");
    let g = QExpansion::new(qf.coeffs.iter().enumerate().map(|(n, a)| a * C64::from_polar(1.0, 0.1 * n as f64)).collect());
    let fg = petersson(&qf, &g, 11, &cfg).unwrap();
    let gf = petersson(&g, &qf, 11, &cfg).unwrap();
    assert!((fg - gf.conj()).norm() < 1e-12 * ff.re);
    let coarse = petersson(&qf, &qf, 11, &PeterssonConfig::depth(1)).unwrap();
    let fine = petersson(&qf, &qf, 11, &PeterssonConfig::depth(2)).unwrap();
    assert!(((coarse - fine) / fine).norm() < 1e-3);
    let short = petersson(&qf, &qf, 11, &PeterssonConfig { y_cutoff: 20.0, ..cfg }).unwrap();
    assert!(((short - ff) / ff).norm() < 1e-3);
}

#[test]
fn petersson_norm_matches_rankin_residue() {
    let f = load_11a();
    let qf = QExpansion::from_eigenform(&f);
    let ff = petersson(&qf, &qf, 11, &PeterssonConfig::default()).unwrap().re;
    let res = rankin_residue(&f, 100_000, &DEFAULT_DELTAS).unwrap();
    // residue of Σ a_n^2 n^{-s-1} from that of L^{(11)}
    let res_d = res.value / zeta_partial(11, c(2.0, 0.0)).re / (1.0 - 11f64.powi(-2));
    let want = gamma0_index(11) * res_d / 12.0;
    println!("petersson {ff} residue-side {want} spread {}", res.spread);
    assert!(res.spread < 0.05);
    assert!(((ff - want) / want).abs() < 1e-3, "{ff} vs {want}");
}
