//! Splitting a derivation of a matrix ring as ad(v + diag(c)) + lift(u).

use infmat::derivation::{decompose, Ambient, MatrixDerivation};
use infmat::matrix::{diag, FiniteMatrix, Matrix, Operator, Window};
use infmat::ring::{formal_derivative, PolyZ, Ring};

fn main() {
    let w = Window::new(5).unwrap();

    // ad(S + diag(t·i) + e_02(t)) + lift(d/dt) over Z[t]
    let r = PolyZ;
    let a = Matrix::from(Operator::shift(&PolyZ))
        .add(&diag(&PolyZ, move |i| r.from_coeffs(&[0, i as i64])))
        .unwrap()
        .add(&FiniteMatrix::unit(&PolyZ, 0, 2, PolyZ.t()).into())
        .unwrap();
    let d = MatrixDerivation::inner(Ambient::Rcf, a)
        .unwrap()
        .sum(&MatrixDerivation::lift(Ambient::Rcf, formal_derivative()))
        .unwrap();

    let report = decompose(&d, w, 0, 8, 0);
    println!("status: {}", report.status.label());
    println!("v: {:?}", report.v_offdiag.iter().map(|(i, j, x)| (i, j, PolyZ.format(x))).collect::<Vec<_>>());
    println!("c: {:?}", report.correction.iter().map(|x| PolyZ.format(x)).collect::<Vec<_>>());
    println!("u: {}", report.residual_description);
    println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
}
