//! Row-finiteness probing of a recovered inner part.

use infmat::derivation::lemma3_row_probe;
use infmat::matrix::{diag, FiniteMatrix, Matrix, Operator, Window};
use infmat::ring::{Integers, Ring};
use num_bigint::BigInt;

fn main() {
    let ones: Matrix<Integers> = Operator::ones_row(&Integers, 0).into();
    let shift: Matrix<Integers> = Operator::shift(&Integers).into();
    let d = diag(&Integers, BigInt::from);
    let f = Matrix::Finite(FiniteMatrix::from_entries(&Integers, (0..40).map(|j| (3, j, Integers.one()))));

    for n in [4, 8, 16] {
        let w = Window::new(n).unwrap();
        for (name, m) in [("ones_row", &ones), ("shift", &shift), ("diag", &d), ("finite row 3", &f)] {
            let p = lemma3_row_probe(m, w);
            println!("n = {n:<2} {name:<13} passed = {:<5} reach = {:<3} {}", p.passed, p.reach, p.witness.unwrap_or_default());
        }
    }
}
