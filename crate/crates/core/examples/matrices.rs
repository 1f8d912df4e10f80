//! Finite matrices, lazy operators, the product table and windows.

use infmat::matrix::{diag, FiniteMatrix, Matrix, Operator, Window};
use infmat::ring::{IntegersMod, Ring};

fn main() {
    let z5 = IntegersMod::new(5).unwrap();
    let w = Window::new(4).unwrap();

    let s: Matrix<IntegersMod> = Operator::shift(&z5).into();
    let r = z5;
    let d = diag(&z5, move |i| r.from_int(i as i64));
    let ones: Matrix<IntegersMod> = Operator::ones_row(&z5, 0).into();
    let e = |i, j| Matrix::Finite(FiniteMatrix::unit(&z5, i, j, 1));

    for (name, m) in [("S", &s), ("diag(i)", &d), ("ones_row", &ones), ("e_12", &e(1, 2))] {
        println!("{name:<9} class {:?}", m.class());
    }

    let sd = s.mul(&d).unwrap();
    println!("S·diag(i) on window 4: {:?}", sd.window_of(w).iter().collect::<Vec<_>>());
    println!("[S, e_11] on window 4: {:?}", s.bracket(&e(1, 1)).unwrap().window_of(w).iter().collect::<Vec<_>>());

    for (name, p) in [("ones_row·S", ones.mul(&s)), ("S·e_12", s.mul(&e(1, 2))), ("S·S", s.mul(&s))] {
        println!("{name:<10} class {:?}", p.unwrap().class());
    }

    let a = FiniteMatrix::from_entries(&z5, [(0, 1, 2), (1, 2, 3)]);
    println!("lemma1_shape(k = 1): {}, k = 0: {}", a.lemma1_shape(1), a.lemma1_shape(0));
    println!("triples: {}", infmat::matrix::triples_json(&a));
}
