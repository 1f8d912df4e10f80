//! Lie derivations of sl_inf and gl: membership, validation and splitting.

use infmat::derivation::Status;
use infmat::lie::{lie_decompose, lie_validate, sl_member, LieAmbient, LieDecomposeConfig, LieDerivation, LieProbe, SlMembershipOracle};
use infmat::matrix::{FiniteMatrix, Matrix, Operator, Window};
use infmat::ring::{inner_ring_derivation, Integers, IntegersMod, Mat2, Ring};

fn main() {
    let m = Mat2::new(3).unwrap();
    let oracle = SlMembershipOracle::new(&m).unwrap();
    let x = FiniteMatrix::unit(&m, 0, 0, [1, 0, 0, 2]);
    println!("e_00([[1,0],[0,2]]) in sl: {:?}", sl_member(&x, &oracle));

    let w = Window::new(5).unwrap();
    let z3 = IntegersMod::new(3).unwrap();
    let d = LieDerivation::ad(LieAmbient::SlInf, Operator::shift(&z3).into()).unwrap();
    println!("ad(S) diagnostics: {:?}", lie_validate(&d, w, 0, 8));
    let p = LieProbe::DiagDiff(1, 10);
    println!("D({}) = {:?}", p.describe(&z3), d.eval(&p).window_of(w).iter().collect::<Vec<_>>());

    let a: Matrix<Mat2> = FiniteMatrix::unit(&m, 0, 1, m.one()).into();
    let u = inner_ring_derivation(&m, &m.parse("[[0,1],[2,0]]").unwrap()).unwrap();
    for ambient in [LieAmbient::SlInf, LieAmbient::Gl, LieAmbient::GlRcf] {
        let d = LieDerivation::ad(ambient, a.clone())
            .unwrap()
            .sum(&LieDerivation::lift(ambient, u.clone()))
            .unwrap();
        let report = lie_decompose(&d, Window::new(4).unwrap(), &LieDecomposeConfig::default());
        println!("{ambient}: {} with u = {}", report.status.label(), report.residual_description);
    }

    let over_z = LieDerivation::ad(LieAmbient::SlInf, Operator::shift(&Integers).into()).unwrap();
    let report = lie_decompose(&over_z, w, &LieDecomposeConfig::default());
    if let Status::Unsupported(why) = &report.status {
        println!("Z: {why}");
    }
}
