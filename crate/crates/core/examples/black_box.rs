//! Validating user-supplied derivations given only on matrix units.

use infmat::derivation::{decompose_with, validate_derivation, Ambient, DecomposeConfig, MatrixDerivation};
use infmat::matrix::{FiniteMatrix, Matrix, Window};
use infmat::ring::{IntegersMod, Ring};

fn main() {
    let z7 = IntegersMod::new(7).unwrap();
    let w = Window::new(6).unwrap();
    let ring = z7;

    // d(e_ij(r)) = [e_01(1), e_ij(r)], written out by hand
    let good = MatrixDerivation::from_fn(&z7, Ambient::Inf, "hand ad(e_01)", move |i, j, r| {
        let mut entries = Vec::new();
        if i == 1 {
            entries.push((0, j, *r));
        }
        if j == 0 {
            entries.push((i, 1, ring.neg(r)));
        }
        Matrix::Finite(FiniteMatrix::from_entries(&ring, entries))
    });
    println!("good: {:?}", validate_derivation(&good, w, 0, 8));
    println!("good decomposes: {}", decompose_with(&good, w, &DecomposeConfig::default()).status.label());

    // the transpose map is additive but not a derivation
    let r2 = z7;
    let bad = MatrixDerivation::from_fn(&z7, Ambient::Inf, "transpose", move |i, j, r| {
        Matrix::Finite(FiniteMatrix::unit(&r2, j, i, *r))
    });
    for diag in validate_derivation(&bad, w, 0, 8) {
        println!("bad: {diag}");
    }

    // a box that never stops growing exhausts the probe budget
    let r3 = z7;
    let greedy = MatrixDerivation::from_fn(&z7, Ambient::Inf, "greedy", move |i, j, r| {
        let entries = (0..(i + j + 1) * 50_000).map(|k| (k, j, *r));
        Matrix::Finite(FiniteMatrix::from_entries(&r3, entries))
    });
    let report = decompose_with(&greedy, w, &DecomposeConfig { max_support: 10_000, ..DecomposeConfig::default() });
    println!("greedy: {} ({})", report.status.label(), report.status.detail().unwrap_or(""));
}
