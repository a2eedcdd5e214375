use super::form::{Connection, OneForm, PUNCTURE_TOL};
use super::path::{Path, Segment, Tangential};
use super::solver::{Propagator, SolverConfig};
use crate::ncalg::{Alphabet, Series, Word};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegBackend {
    /// Cut the path at `|q| = ε` for a short ε-ladder and extrapolate.
    Richardson,
    /// Integrate the gauge-transformed system `exp(-log q Res) S` in the
    /// logarithmic coordinate until `|q|` reaches `floor`.
    Subtraction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegConfig {
    pub backend: RegBackend,
    /// Largest `|q|` of the Richardson ladder.
    pub eps: f64,
    /// Ratio between consecutive ladder points.
    pub ratio: f64,
    /// Largest accepted distance between the ladder values and the extrapolated limit.
    pub extrapolation_tol: f64,
    /// Final `|q|` of the subtraction backend.
    pub floor: f64,
}

impl Default for RegConfig {
    fn default() -> Self {
        RegConfig {
            backend: RegBackend::Subtraction,
            eps: 1e-12,
            ratio: 0.5,
            extrapolation_tol: 1e-6,
            floor: 1e-30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransportConfig {
    pub solver: SolverConfig,
    pub reg: RegConfig,
}

/// Minimal distance between the path and a pole that is not an endpoint puncture.
const POLE_CLEARANCE: f64 = 1e-9;

fn check_poles(conn: &Connection, segs: &[Segment], allowed: &[C64]) -> Result<()> {
    for a in conn.poles() {
        if allowed.iter().any(|c| (c - a).norm() <= PUNCTURE_TOL * (1.0 + c.norm())) {
            continue;
        }
        for s in segs {
            if s.distance_to(a) < POLE_CLEARANCE {
                return Err(Error::PoleOnPath(a.to_string()));
            }
        }
    }
    Ok(())
}

/// Pullback generator `A(s)` along a segment.
fn segment_generator<'a>(
    seg: Segment,
    active: &'a [(usize, &'a OneForm)],
    template: &'a Series,
) -> impl Fn(f64) -> Series + 'a {
    move |s| {
        let t = seg.point(s);
        let dt = seg.velocity(s);
        let mut a = template.zeros_like();
        let c = a.coeffs_mut();
        for &(idx, f) in active {
            c[idx] = f.pullback(t, dt);
        }
        a
    }
}

fn unit_for(conn: &Connection) -> Series {
    Series::unit(conn.alphabet(), conn.truncation())
}

fn transport_segments(conn: &Connection, segs: &[Segment], cfg: &TransportConfig) -> Result<Series> {
    let template = unit_for(conn);
    let active = conn.active(&template);
    let mut total = template.clone();
    if active.is_empty() {
        return Ok(total);
    }
    for &seg in segs {
        let gen = segment_generator(seg, &active, &template);
        let u = Propagator::new(gen, &template, &cfg.solver).run(0.0, 1.0)?;
        total = u.mul_raw(&total);
    }
    Ok(total)
}

/// Chen transport `Σ_n ∫_γ Ω^n`, truncated at the connection's degree.
/// Decorated paths are routed through [`regularized_transport`].
pub fn transport(conn: &Connection, path: &Path) -> Result<Series> {
    transport_with(conn, path, &TransportConfig::default())
}

pub fn transport_with(conn: &Connection, path: &Path, cfg: &TransportConfig) -> Result<Series> {
    if path.is_decorated() {
        return regularized_transport_with(conn, path, cfg);
    }
    check_poles(conn, path.segments(), &[])?;
    transport_segments(conn, path.segments(), cfg)
}

/// `∫_γ ω1 ⋯ ωn` with `ω1` at the largest time.
pub fn iterated_integral(forms: &[OneForm], path: &Path) -> Result<C64> {
    iterated_integral_with(forms, path, &TransportConfig::default())
}

pub fn iterated_integral_with(forms: &[OneForm], path: &Path, cfg: &TransportConfig) -> Result<C64> {
    if path.is_decorated() {
        return Err(Error::InvalidPath("iterated integrals need ordinary endpoints".into()));
    }
    let n = forms.len();
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let alphabet = Alphabet::new((0..n).map(|i| format!("w{i}")))?;
    let mut conn = Connection::new(&alphabet, n);
    for (i, f) in forms.iter().enumerate() {
        conn = conn.with_form(Word(vec![i]), f.clone())?;
    }
    check_poles(&conn, path.segments(), &[])?;
    let t = transport_segments(&conn, path.segments(), cfg)?;
    Ok(t.coeff(&Word((0..n).collect())))
}

/// `Σ_w w Res_c(α_w)`. The residue of `dq/q` does not depend on the scaling
/// `q = (t - c)/b`, so `tangent` only has to be nonzero.
pub fn residue_series(conn: &Connection, c: C64, tangent: C64) -> Result<Series> {
    if tangent.norm() == 0.0 {
        return Err(Error::InvalidArgument("tangent vector must be nonzero".into()));
    }
    let mut out = Series::zero(conn.alphabet(), conn.truncation());
    let mut found = false;
    for (w, f) in conn.forms() {
        if let Some(r) = f.residue_at(c) {
            found = true;
            if f.conjugate {
                return Err(Error::InvalidArgument(format!(
                    "conjugated form on `{}` has a pole at the puncture {c}",
                    conn.alphabet().format_word(w)
                )));
            }
            if w.len() <= conn.truncation() {
                out.set(w, r)?;
            }
        }
    }
    if !found {
        return Err(Error::NotAPuncture(c.to_string()));
    }
    Ok(out)
}

/// Regularized transport for paths with tangential decorations.
///
/// A path ending at a tangential point `(c, b)` must end with a straight
/// segment into `c`; the local parameter is `q = (t - c)/b` with the
/// principal branch of `log q` along that segment. A path starting at a
/// tangential point is handled as the inverse of its reverse, and a path
/// decorated at both ends is split in the middle.
pub fn regularized_transport(conn: &Connection, path: &Path) -> Result<Series> {
    regularized_transport_with(conn, path, &TransportConfig::default())
}

pub fn regularized_transport_with(conn: &Connection, path: &Path, cfg: &TransportConfig) -> Result<Series> {
    match (path.start_decoration(), path.end_decoration()) {
        (None, None) => transport_with(conn, path, cfg),
        (None, Some(t)) => end_regularized(conn, path, t, cfg),
        (Some(_), None) => end_regularized_rev(conn, path, cfg),
        (Some(_), Some(_)) => {
            let (first, second) = path.split_middle();
            let a = end_regularized_rev(conn, &first, cfg)?;
            let b = regularized_transport_with(conn, &second, cfg)?;
            Ok(b.mul_raw(&a))
        }
    }
}

fn end_regularized_rev(conn: &Connection, path: &Path, cfg: &TransportConfig) -> Result<Series> {
    let rev = path.reverse();
    let t = rev.end_decoration().expect("reversed start decoration");
    end_regularized(conn, &rev, t, cfg)?.inverse()
}

fn end_regularized(conn: &Connection, path: &Path, tang: Tangential, cfg: &TransportConfig) -> Result<Series> {
    let segs = path.segments();
    let (last, rest) = segs.split_last().expect("nonempty path");
    let p = match *last {
        Segment::Line { from, to } if (to - tang.point).norm() <= 1e-10 * (1.0 + to.norm()) => from,
        _ => {
            return Err(Error::InvalidPath(
                "a tangential end point must be reached by a straight segment".into(),
            ))
        }
    };
    let c = tang.point;
    if (p - c).norm() == 0.0 {
        return Err(Error::InvalidPath("degenerate final segment".into()));
    }
    check_poles(conn, rest, &[])?;
    check_poles(conn, &[*last], &[c])?;
    let res = residue_series(conn, c, tang.tangent)?;
    let head = transport_segments(conn, rest, cfg)?;
    let q_p = (p - c) / tang.tangent;
    let log_qp = q_p.ln();
    let template = unit_for(conn);
    let active = conn.active(&template);
    // t(u) = c + e^u (p - c), u <= 0
    let tail = |u_end: f64, subtract: bool| -> Result<Series> {
        if subtract {
            let gen = |u: f64| {
                let delta = (p - c) * u.exp();
                let mut a = template.zeros_like();
                let co = a.coeffs_mut();
                for &(idx, f) in &active {
                    co[idx] = f.pullback_log(c, delta, true);
                }
                let l = log_qp + u;
                let left = res.scale(-l).exp_raw();
                let right = res.scale(l).exp_raw();
                left.mul_raw(&a).mul_raw(&right)
            };
            let g0 = res.scale(-log_qp).exp_raw();
            Ok(Propagator::new(gen, &template, &cfg.solver).run(0.0, u_end)?.mul_raw(&g0))
        } else {
            let gen = |u: f64| {
                let delta = (p - c) * u.exp();
                let mut a = template.zeros_like();
                let co = a.coeffs_mut();
                for &(idx, f) in &active {
                    co[idx] = f.pullback_log(c, delta, false);
                }
                a
            };
            let s = Propagator::new(gen, &template, &cfg.solver).run(0.0, u_end)?;
            let log_q = log_qp + u_end;
            Ok(res.scale(-log_q).exp_raw().mul_raw(&s))
        }
    };
    let abs_qp = q_p.norm();
    let reg = match cfg.reg.backend {
        RegBackend::Subtraction => tail((cfg.reg.floor / abs_qp).ln().min(0.0), true)?,
        RegBackend::Richardson => {
            let e = [cfg.reg.eps, cfg.reg.eps * cfg.reg.ratio, cfg.reg.eps * cfg.reg.ratio * cfg.reg.ratio];
            let vals = e
                .iter()
                .map(|&eps| tail((eps / abs_qp).ln().min(0.0), false))
                .collect::<Result<Vec<_>>>()?;
            let lim = extrapolate(&e, &vals);
            let residual = vals.iter().map(|v| v.max_abs_diff_raw(&lim)).fold(0.0, f64::max);
            if residual > cfg.reg.extrapolation_tol {
                return Err(Error::Extrapolation { residual, tol: cfg.reg.extrapolation_tol });
            }
            lim
        }
    };
    Ok(reg.mul_raw(&head))
}

/// Fits `R(ε) = R0 + ε (A log ε + B)` through three ladder values.
fn extrapolate(e: &[f64; 3], vals: &[Series]) -> Series {
    // Solve [1, ε log ε, ε] x = v by Cramer's rule, scaled by the first ε.
    let s = e[0];
    let rows: Vec<[f64; 3]> = e.iter().map(|&x| [1.0, x / s * x.ln(), x / s]).collect();
    let det3 = |m: &[[f64; 3]]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let det = det3(&rows);
    // weights for R0: replace the first column by the value vector
    let mut w = [0.0; 3];
    for (i, wi) in w.iter_mut().enumerate() {
        let mut m = rows.clone();
        for (r, row) in m.iter_mut().enumerate() {
            row[0] = if r == i { 1.0 } else { 0.0 };
        }
        *wi = det3(&m) / det;
    }
    let mut out = vals[0].zeros_like();
    for (v, &wi) in vals.iter().zip(&w) {
        out.add_assign_raw(v, C64::new(wi, 0.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_connection_gives_unit() {
        let a = Alphabet::indexed(2).unwrap();
        let conn = Connection::new(&a, 3);
        let p = Path::polyline(&[c(0.0, 0.0), c(1.0, 2.0)]).unwrap();
        assert_eq!(transport(&conn, &p).unwrap(), Series::unit(&a, 3));
    }

    #[test]
    fn constant_form_length_one() {
        let f = OneForm::polynomial(vec![c(1.0, 0.0)]);
        let p = Path::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((iterated_integral(&[f.clone()], &p).unwrap() - 1.0).norm() < 1e-15);
        // ∫ dt dt = 1/2
        assert!((iterated_integral(&[f.clone(), f], &p).unwrap() - 0.5).norm() < 1e-15);
    }

    #[test]
    fn pole_on_path_detected() {
        let p = Path::line(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        let f = OneForm::log(c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(iterated_integral(&[f], &p), Err(Error::PoleOnPath(_))));
    }

    #[test]
    fn kz_residues() {
        let kz = Connection::kz(2);
        let r0 = residue_series(&kz, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(r0, Series::letter(kz.alphabet(), 2, 0));
        let r1 = residue_series(&kz, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(r1, Series::letter(kz.alphabet(), 2, 1));
        assert!(matches!(residue_series(&kz, c(2.0, 0.0), c(1.0, 0.0)), Err(Error::NotAPuncture(_))));
        let a = Alphabet::indexed(1).unwrap();
        let conn = Connection::new(&a, 2)
            .with_form(Word(vec![0]), OneForm::log(c(3.0, 0.0), c(0.0, 0.0)))
            .unwrap();
        assert_eq!(residue_series(&conn, c(3.0, 0.0), c(1.0, 0.0)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn extrapolation_weights_reproduce_model() {
        let a = Alphabet::indexed(1).unwrap();
        let e: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
        let vals: Vec<Series> = e
            .iter()
            .map(|&x| Series::unit(&a, 0).scale(c(2.0 + x * (3.0 * x.ln() - 1.0), 0.0)))
            .collect();
        let lim = extrapolate(&e, &vals);
        assert!((lim.constant() - 2.0).norm() < 1e-12);
    }
}
