//! `unifrob`: command-line driver for transport series, Bloch-Wigner tables,
//! Rankin-Selberg checks, local zeta integrals and regulator vectors.

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use unifrob::automorphic::{
    parse_local_sidecar, partial_l, petersson, rankin_dirichlet, rankin_residue, zeta_partial, EigenformData,
    LocalRep, PeterssonConfig, QExpansion, DEFAULT_DELTAS,
};
use unifrob::iterint::{Connection, Path, Tangential};
use unifrob::ncalg::{lyndon_basis, write_series, Alphabet};
use unifrob::regulator::{complete_l, prime_level_run, zeta_local, BaseMode, Component};
use unifrob::singleval::{bw_csv, bw_table, BasePoint, FrobeniusSpec};

const THREADS_VAR: &str = "UNIFROB_THREADS";

#[derive(Parser)]
#[command(name = "unifrob", version, about = "Unipotent transport, Bloch-Wigner tables and regulator vectors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lyndon/Hall basis of the free Lie algebra.
    Hall(HallArgs),
    /// Coefficients of the transport series for given words.
    Iterint(IterintArgs),
    /// Full (regularized) transport series.
    Transport(TransportArgs),
    /// Generalized Bloch-Wigner table.
    Bw(BwArgs),
    /// Dirichlet-series versus Euler-product check of the Rankin-Selberg identity.
    RsCheck(RsArgs),
    /// Local zeta integrals at a prime dividing the level.
    ZetaLocal(ZetaLocalArgs),
    /// Regulator vector of a newform of prime level.
    Regulator(RegulatorArgs),
}

#[derive(Args)]
struct Common {
    /// Validate inputs and stop before computing.
    #[arg(long)]
    dry_run: bool,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HallArgs {
    /// Number of letters (named e0, e1, ...) or a comma-separated list of names.
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    max_degree: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConnArgs {
    /// Connection JSON; the KZ connection on P^1 - {0, 1, ∞} when absent.
    #[arg(long)]
    connection: Option<PathBuf>,
    /// Truncation degree for the KZ connection.
    #[arg(long, default_value_t = 2)]
    depth: usize,
}

#[derive(Args)]
struct PathArgs {
    /// Path JSON (line/arc/tangential records).
    #[arg(long, conflicts_with_all = ["from", "to"])]
    path: Option<PathBuf>,
    /// Start point `re[,im]` of a straight path.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    /// End point `re[,im]` of a straight path.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
    /// Tangent `re[,im]` making the start a tangential base point.
    #[arg(long, allow_hyphen_values = true)]
    start_tangent: Option<String>,
    /// Tangent `re[,im]` making the end a tangential base point.
    #[arg(long, allow_hyphen_values = true)]
    end_tangent: Option<String>,
}

#[derive(Args)]
struct IterintArgs {
    #[command(flatten)]
    conn: ConnArgs,
    #[command(flatten)]
    path: PathArgs,
    /// Word such as `e0.e1`, letters joined by `.`; repeat for several.
    #[arg(long, required = true, action = ArgAction::Append)]
    word: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TransportArgs {
    #[command(flatten)]
    conn: ConnArgs,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BwArgs {
    #[arg(long, value_enum, default_value_t = Curve::P1Minus012)]
    curve: Curve,
    /// `tangential:0`, `tangential:re,im:tre,tim` or `point:re,im`.
    #[arg(long, allow_hyphen_values = true)]
    base: String,
    /// Target points `re[,im]`; repeat for several rows.
    #[arg(long, required = true, action = ArgAction::Append, allow_hyphen_values = true)]
    target: Vec<String>,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Curve {
    #[value(name = "p1-minus-012")]
    P1Minus012,
}

#[derive(Args)]
struct EigenformArgs {
    /// `n,a_n` table; a `<stem>.local.json` sidecar next to it is applied.
    #[arg(long)]
    eigenform: PathBuf,
    /// Level; read from the leading digits of the file name when absent.
    #[arg(long)]
    level: Option<u64>,
    /// Explicit sidecar path.
    #[arg(long)]
    local: Option<PathBuf>,
}

#[derive(Args)]
struct RsArgs {
    #[command(flatten)]
    form: EigenformArgs,
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    /// Terms of the Dirichlet series.
    #[arg(long, default_value_t = 100_000)]
    terms: usize,
    /// Largest prime in the Euler product (defaults to `terms`).
    #[arg(long)]
    pmax: Option<usize>,
    /// Relative tolerance (1e-4 for s < 3, else 1e-6).
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Steinberg,
    Ramified,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComponentArg {
    Infinity,
    Zero,
}

#[derive(Args)]
struct ZetaLocalArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, value_enum, default_value_t = Kind::Steinberg)]
    kind: Kind,
    /// Twist of the Steinberg component of the first form.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    chi: i8,
    /// Twist for the second form (defaults to `chi`).
    #[arg(long, allow_hyphen_values = true)]
    chi2: Option<i8>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<i8>,
    /// Epsilon factor of the second form (defaults to `epsilon`).
    #[arg(long, allow_hyphen_values = true)]
    epsilon2: Option<i8>,
    #[arg(long, value_enum, default_value_t = ComponentArg::Zero)]
    component: ComponentArg,
    /// Value of `s` as `re[,im]`; repeat for several rows.
    #[arg(long, action = ArgAction::Append, default_values_t = ["1".to_string()], allow_hyphen_values = true)]
    s: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Tangential,
    Rational,
}

#[derive(Args)]
struct RegulatorArgs {
    #[command(flatten)]
    form: EigenformArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Tangential)]
    mode: ModeArg,
    /// `𝓔_0(b, 1)` as `re[,im]`; required in rational mode.
    #[arg(long, allow_hyphen_values = true)]
    eisenstein_base: Option<String>,
    /// Largest prime in the residue ladder.
    #[arg(long, default_value_t = 100_000)]
    pmax: usize,
    /// Largest accepted relative spread of the residue ladder.
    #[arg(long, default_value_t = 0.05)]
    residue_tol: f64,
    /// Petersson quadrature refinement (nodes 8·2^k by 6·2^k).
    #[arg(long, default_value_t = 2)]
    petersson_depth: u32,
    /// Supplied `(ω_f, ω_f)` instead of the quadrature.
    #[arg(long)]
    norm: Option<f64>,
    /// Append `NONSPLIT=true/false`.
    #[arg(long)]
    certificate: bool,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Usage(String),
    Io(String),
    Tolerance(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Tolerance(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Tolerance(m) => m,
        }
    }
}

impl From<unifrob::Error> for Failure {
    fn from(e: unifrob::Error) -> Self {
        use unifrob::Error as E;
        match e {
            E::StepSize(_) | E::Extrapolation { .. } => Failure::Tolerance(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Out<T> = std::result::Result<T, Failure>;

fn read(path: &FsPath) -> Out<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(common: &Common, text: &str) -> Out<()> {
    match &common.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_complex(text: &str) -> Out<C64> {
    let bad = || Failure::Usage(format!("cannot read `{text}` as re[,im]"));
    let mut parts = text.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

fn parse_base(text: &str) -> Out<BasePoint> {
    let bad = || Failure::Usage(format!("base `{text}` is not tangential:<point>[:<tangent>] or point:<re,im>"));
    if let Some(rest) = text.strip_prefix("point:") {
        return Ok(BasePoint::Point(parse_complex(rest)?));
    }
    let rest = text.strip_prefix("tangential:").ok_or_else(bad)?;
    let (point, tangent) = match rest.split_once(':') {
        Some((p, t)) => (parse_complex(p)?, parse_complex(t)?),
        None => (parse_complex(rest)?, C64::new(1.0, 0.0)),
    };
    if tangent.norm() == 0.0 {
        return Err(bad());
    }
    Ok(BasePoint::Tangential(Tangential { point, tangent }))
}

fn load_connection(a: &ConnArgs) -> Out<Connection> {
    match &a.connection {
        Some(p) => Ok(Connection::from_json(&read(p)?)?),
        None => {
            if a.depth == 0 {
                return Err(Failure::Usage("depth must be positive".into()));
            }
            Ok(Connection::kz(a.depth))
        }
    }
}

fn load_path(a: &PathArgs) -> Out<Path> {
    let path = match (&a.path, &a.from, &a.to) {
        (Some(p), _, _) => Path::from_json(&read(p)?)?,
        (None, Some(f), Some(t)) => Path::line(parse_complex(f)?, parse_complex(t)?)?,
        _ => return Err(Failure::Usage("give --path or both --from and --to".into())),
    };
    let mut path = path;
    if let Some(t) = &a.start_tangent {
        let point = path.start_point();
        path = path.with_start(Tangential { point, tangent: parse_complex(t)? })?;
    }
    if let Some(t) = &a.end_tangent {
        let point = path.end_point();
        path = path.with_end(Tangential { point, tangent: parse_complex(t)? })?;
    }
    Ok(path)
}

fn level_from_name(path: &FsPath) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let digits: String = stem.chars().take_while(char::is_ascii_digit).collect();
    digits.parse().ok()
}

fn load_eigenform(a: &EigenformArgs) -> Out<EigenformData> {
    let level = match a.level.or_else(|| level_from_name(&a.eigenform)) {
        Some(l) => l,
        None => return Err(Failure::Usage("cannot infer the level from the file name; pass --level".into())),
    };
    let text = read(&a.eigenform)?;
    let mut f = EigenformData::from_csv(&text, level, a.eigenform.display().to_string())?;
    let sidecar = match &a.local {
        Some(p) => Some(p.clone()),
        None => {
            let stem = a.eigenform.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let p = a.eigenform.with_file_name(format!("{stem}.local.json"));
            p.exists().then_some(p)
        }
    };
    if let Some(p) = sidecar {
        f = f.with_locals(&parse_local_sidecar(&read(&p)?)?)?;
    }
    Ok(f)
}

fn dry(common: &Common, what: &str) -> Out<bool> {
    if common.dry_run {
        emit(common, &format!("dry-run ok: {what}\n"))?;
    }
    Ok(common.dry_run)
}

fn hall(a: &HallArgs) -> Out<()> {
    let alphabet = match a.alphabet.parse::<usize>() {
        Ok(k) => Alphabet::indexed(k)?,
        Err(_) => Alphabet::new(a.alphabet.split(',').map(str::trim))?,
    };
    if a.max_degree == 0 {
        return Err(Failure::Usage("max-degree must be positive".into()));
    }
    if dry(&a.common, &format!("{} letters, degree <= {}", alphabet.len(), a.max_degree))? {
        return Ok(());
    }
    let mut out = String::new();
    for h in lyndon_basis(&alphabet, a.max_degree) {
        out.push_str(&format!("{}\t{}\n", h.degree(), h.label));
    }
    emit(&a.common, &out)
}

fn iterint(a: &IterintArgs) -> Out<()> {
    let conn = load_connection(&a.conn)?;
    let path = load_path(&a.path)?;
    let words = a
        .word
        .iter()
        .map(|w| conn.alphabet().parse_word(w))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = words.iter().find(|w| w.len() > conn.truncation()) {
        return Err(Failure::Usage(format!("word of length {} exceeds depth {}", w.len(), conn.truncation())));
    }
    if dry(&a.common, &format!("{} words", words.len()))? {
        return Ok(());
    }
    let t = unifrob::iterint::transport(&conn, &path)?;
    let mut out = String::from("word,re,im\n");
    for (w, text) in words.iter().zip(&a.word) {
        let v = t.coeff(w);
        out.push_str(&format!("{text},{:.17e},{:.17e}\n", v.re, v.im));
    }
    emit(&a.common, &out)
}

fn transport(a: &TransportArgs) -> Out<()> {
    let conn = load_connection(&a.conn)?;
    let path = load_path(&a.path)?;
    if dry(&a.common, &format!("truncation {}", conn.truncation()))? {
        return Ok(());
    }
    let t = unifrob::iterint::transport(&conn, &path)?;
    emit(&a.common, &write_series(&t))
}

fn bw(a: &BwArgs) -> Out<()> {
    let base = parse_base(&a.base)?;
    let targets = a.target.iter().map(|t| parse_complex(t)).collect::<Out<Vec<_>>>()?;
    let (conn, spec) = match a.curve {
        Curve::P1Minus012 => {
            let conn = Connection::kz(a.depth.max(1));
            let spec = FrobeniusSpec::kz(conn.alphabet());
            (conn, spec)
        }
    };
    if let Some(y) = targets.iter().find(|y| conn.poles().iter().any(|p| (p - *y).norm() == 0.0)) {
        return Err(Failure::Usage(format!("target {y} is a puncture")));
    }
    if dry(&a.common, &format!("{} targets, depth {}", targets.len(), a.depth))? {
        return Ok(());
    }
    let tables = targets
        .iter()
        .map(|&y| bw_table(&conn, &spec, base, y, a.depth))
        .collect::<Result<Vec<_>, _>>()?;
    emit(&a.common, &bw_csv(&tables)?)
}

fn rs_check(a: &RsArgs) -> Out<()> {
    let f = load_eigenform(&a.form)?;
    let pmax = a.pmax.unwrap_or(a.terms);
    if !(a.s > 1.0) {
        return Err(Failure::Usage(format!("s = {} must exceed 1", a.s)));
    }
    if a.terms > f.n_max() || pmax > f.n_max() {
        return Err(Failure::Usage(format!("the table has {} coefficients", f.n_max())));
    }
    let tol = a.tol.unwrap_or(if a.s < 3.0 { 1e-4 } else { 1e-6 });
    if dry(&a.common, &format!("level {}, {} coefficients", f.level, f.n_max()))? {
        return Ok(());
    }
    let s = C64::new(a.s, 0.0);
    let lhs = rankin_dirichlet(&f, &f, s, a.terms)?.value;
    let rhs = complete_l(&f, &f, s, pmax)? / zeta_partial(f.level, s * 2.0);
    let err = ((lhs - rhs) / rhs).norm();
    let verdict = if err < tol { "PASS" } else { "FAIL" };
    let partial = partial_l(&f, &f, s, pmax)?.value;
    emit(
        &a.common,
        &format!(
            "dirichlet={:.15e}\neuler={:.15e}\npartial_l={:.15e}\nrelative_error={err:.3e}\ntolerance={tol:e}\n{verdict}\n",
            lhs.re, rhs.re, partial.re
        ),
    )?;
    if err < tol {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("relative error {err:e} exceeds {tol:e}")))
    }
}

fn zeta_local_cmd(a: &ZetaLocalArgs) -> Out<()> {
    let rep = |chi: i8, eps: Option<i8>| -> Out<LocalRep> {
        Ok(match a.kind {
            Kind::Steinberg => {
                if a.r != 1 {
                    return Err(Failure::Usage("Steinberg components need r = 1".into()));
                }
                LocalRep::steinberg(a.p, chi, eps)?
            }
            Kind::Ramified => LocalRep::ramified(a.p, a.r, eps)?,
        })
    };
    let pi = rep(a.chi, a.epsilon)?;
    let pi2 = rep(a.chi2.unwrap_or(a.chi), a.epsilon2.or(a.epsilon))?;
    let ss = a.s.iter().map(|t| parse_complex(t)).collect::<Out<Vec<_>>>()?;
    let component = match a.component {
        ComponentArg::Infinity => Component::Infinity,
        ComponentArg::Zero => Component::Zero,
    };
    if dry(&a.common, &format!("p = {}, {} values of s", a.p, ss.len()))? {
        return Ok(());
    }
    let mut out = String::from("s_re,s_im,re,im\n");
    for s in ss {
        let v = zeta_local(&pi, &pi2, component, s)?;
        out.push_str(&format!("{},{},{:.17e},{:.17e}\n", s.re, s.im, v.re, v.im));
    }
    emit(&a.common, &out)
}

fn regulator(a: &RegulatorArgs) -> Out<()> {
    let f = load_eigenform(&a.form)?;
    let mode = match a.mode {
        ModeArg::Tangential => BaseMode::Tangential,
        ModeArg::Rational => BaseMode::Rational,
    };
    let e_base = a.eisenstein_base.as_deref().map(parse_complex).transpose()?;
    if mode == BaseMode::Rational && e_base.is_none() {
        return Err(Failure::Usage("rational mode needs --eisenstein-base".into()));
    }
    if a.pmax > f.n_max() {
        return Err(Failure::Usage(format!("pmax = {} exceeds the {} coefficients", a.pmax, f.n_max())));
    }
    if let Some(n) = a.norm {
        if !(n > 0.0) {
            return Err(Failure::Usage("norm must be positive".into()));
        }
    }
    if dry(&a.common, &format!("level {}, {} coefficients", f.level, f.n_max()))? {
        return Ok(());
    }
    let residue = rankin_residue(&f, a.pmax, &DEFAULT_DELTAS)?;
    let norm = match a.norm {
        Some(n) => n,
        None => {
            let q = QExpansion::from_eigenform(&f);
            petersson(&q, &q, f.level, &PeterssonConfig::depth(a.petersson_depth))?.re
        }
    };
    eprintln!(
        "norm={norm:.12e} residue={:.12e} spread={:.3e} ladder={:?}",
        residue.value, residue.spread, residue.ladder
    );
    let run = prime_level_run(&f, norm, residue.value, mode, e_base)?;
    let mut all = run.reg2.clone();
    all.coords.extend(run.reg3.coords.clone());
    let mut out = all.to_csv()?;
    if a.certificate {
        out.push_str(&all.certificate());
        out.push('\n');
    }
    emit(&a.common, &out)?;
    if residue.value > 0.0 && residue.spread <= a.residue_tol {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!(
            "residue {} with spread {:.3e} is not a stable positive estimate",
            residue.value, residue.spread
        )))
    }
}

fn init_threads() -> Out<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_VAR} = `{v}` is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Out<()> {
    init_threads()?;
    match &cli.cmd {
        Cmd::Hall(a) => hall(a),
        Cmd::Iterint(a) => iterint(a),
        Cmd::Transport(a) => transport(a),
        Cmd::Bw(a) => bw(a),
        Cmd::RsCheck(a) => rs_check(a),
        Cmd::ZetaLocal(a) => zeta_local_cmd(a),
        Cmd::Regulator(a) => regulator(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
