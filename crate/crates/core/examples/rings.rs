//! Coefficient rings, commutators and coefficient derivations.

use infmat::ring::{
    check_derivation_law, check_ring_axioms, commutator, formal_derivative, inner_ring_derivation, Integers,
    IntegersMod, Mat2, PolyZ, Ring, RingSpec,
};

fn main() {
    for spec in ["Z", "Z/6", "Z/9", "Z[t]", "M2(Z/3)"] {
        let parsed = RingSpec::parse(spec).unwrap();
        println!("{parsed:<8} parsed from {spec:?}");
    }

    let m = Mat2::new(3).unwrap();
    let (x, y) = (m.parse("[[0,1],[0,0]]").unwrap(), m.parse("[[0,0],[1,0]]").unwrap());
    println!("[x, y] in M2(Z/3) = {}", m.format(&commutator(&m, &x, &y).unwrap()));
    println!("half in M2(Z/3): {:?}", m.half().map(|h| m.format(&h)));
    println!("half in Z: {:?}", Integers.half());

    println!("axiom violations over Z/6: {}", check_ring_axioms(&IntegersMod::new(6).unwrap(), 1, 200).len());

    let d = formal_derivative();
    let p = PolyZ.parse("[1,0,3]").unwrap();
    println!("d/dt {} = {}", PolyZ.format(&p), PolyZ.format(&d.apply(&p)));
    println!("d/dt law violations: {}", check_derivation_law(&d, 0, 50).len());

    let u = inner_ring_derivation(&m, &x).unwrap();
    println!("{}({}) = {}", u.name(), m.format(&y), m.format(&u.apply(&y)));
}
