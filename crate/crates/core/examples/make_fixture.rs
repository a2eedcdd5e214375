//! Writes the eigenvalue table of the curve 11a by point counting.
//!
//! `cargo run --release -p unipotent-frob --example make_fixture -- <out.csv> [n_max]`

use unifrob::automorphic::{elliptic_curve_eigenform, CURVE_11A};

fn main() {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "11a.csv".into());
    let n_max: usize = args.next().map(|s| s.parse().expect("n_max")).unwrap_or(100_000);
    let f = elliptic_curve_eigenform(&CURVE_11A, 11, n_max).expect("point counts");
    std::fs::write(&out, f.to_csv()).expect("write");
}
