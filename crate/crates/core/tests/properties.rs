use infmat::derivation::{decompose, extract_v, validate_derivation, Ambient, MatrixDerivation, Status};
use infmat::lie::{lie_extract_offdiag, sl_member, LieAmbient, LieDerivation, LieProbe, SlMembershipOracle};
use infmat::matrix::{is_rcf_consistent_on_window, FiniteMatrix, Index, Matrix, MatrixClass, Operator, Window};
use infmat::ring::{
    check_derivation_law, check_ring_axioms, inner_ring_derivation, sample_elements, Integers, IntegersMod,
    Mat2, PolyZ, Ring,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_finite<R: Ring>(ring: &R, rng: &mut ChaCha8Rng, n: Index, count: usize) -> FiniteMatrix<R> {
    FiniteMatrix::from_entries(
        ring,
        (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), ring.random_element(rng, 2))),
    )
}

/// Naive dense product, independent of the sparse kernel.
fn dense_mul<R: Ring>(ring: &R, a: &FiniteMatrix<R>, b: &FiniteMatrix<R>, n: Index) -> FiniteMatrix<R> {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut s = ring.zero();
            for k in 0..n {
                s = ring.add(&s, &ring.mul(&a.entry(i, k), &b.entry(k, j)));
            }
            entries.push((i, j, s));
        }
    }
    FiniteMatrix::from_entries(ring, entries)
}

fn rcf_sample(ring: &Integers, rng: &mut ChaCha8Rng) -> Matrix<Integers> {
    let f = random_finite(ring, rng, 6, 4);
    let a = rng.gen_range(-2i64..=2);
    Matrix::Finite(f)
        .add(&Operator::shift(ring).into())
        .unwrap()
        .add(&Operator::diag(ring, "d", move |i| BigInt::from(a * i as i64 + 1)).into())
        .unwrap()
}

fn axioms_hold<R: Ring>(ring: &R, seed: u64) -> Result<(), TestCaseError> {
    let d = check_ring_axioms(ring, seed, 20);
    prop_assert!(d.is_empty(), "{}: {:?}", ring.name(), d);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), n in 2u64..40, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        axioms_hold(&Integers, seed)?;
        axioms_hold(&IntegersMod::new(n).unwrap(), seed)?;
        axioms_hold(&PolyZ, seed)?;
        axioms_hold(&Mat2::new(p).unwrap(), seed)?;
    }

    #[test]
    fn half_exists_iff_two_is_invertible(n in 2u64..60) {
        let ring = IntegersMod::new(n).unwrap();
        match ring.half() {
            Some(h) => prop_assert_eq!(ring.add(&h, &h), ring.one()),
            None => prop_assert!(n % 2 == 0),
        }
        prop_assert_eq!(ring.half().is_some(), n % 2 == 1);
    }

    #[test]
    fn derivations_closed_under_commutator(seed in any::<u64>()) {
        let m = Mat2::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u1 = inner_ring_derivation(&m, &m.random_element(&mut rng, 2)).unwrap();
        let u2 = inner_ring_derivation(&m, &m.random_element(&mut rng, 2)).unwrap();
        prop_assert!(check_derivation_law(&u1.bracket(&u2), seed, 20).is_empty());
        let mut cat = PolyZ.derivation_catalog(&mut rng);
        let (a, b) = (cat.swap_remove(0), cat.swap_remove(0));
        prop_assert!(check_derivation_law(&a.bracket(&b), seed, 20).is_empty());
    }

    #[test]
    fn unit_relations(i in 0usize..5, j in 0usize..5, k in 0usize..5, l in 0usize..5, r in 0u64..6, s in 0u64..6) {
        let ring = IntegersMod::new(6).unwrap();
        let x = FiniteMatrix::unit(&ring, i, j, r);
        let y = FiniteMatrix::unit(&ring, k, l, s);
        let want = if j == k { FiniteMatrix::unit(&ring, i, l, r * s % 6) } else { FiniteMatrix::zero(&ring) };
        prop_assert_eq!(x.mul(&y).unwrap(), want);
    }

    #[test]
    fn finite_product_matches_dense_and_associates(seed in any::<u64>()) {
        let ring = Mat2::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (
            random_finite(&ring, &mut rng, 5, 6),
            random_finite(&ring, &mut rng, 5, 6),
            random_finite(&ring, &mut rng, 5, 6),
        );
        prop_assert_eq!(a.mul(&b).unwrap(), dense_mul(&ring, &a, &b, 5));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn window_is_additive(seed in any::<u64>(), n in 1usize..10) {
        let ring = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rcf_sample(&ring, &mut rng);
        let b = rcf_sample(&ring, &mut rng);
        let w = Window::new(n).unwrap();
        prop_assert_eq!(a.add(&b).unwrap().window_of(w), a.window_of(w).add(&b.window_of(w)).unwrap());
        prop_assert!(a.add(&a.neg()).unwrap().window_of(w).is_zero());
    }

    #[test]
    fn finite_matrices_are_an_ideal(seed in any::<u64>()) {
        let ring = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rcf_sample(&ring, &mut rng);
        let x = Matrix::Finite(random_finite(&ring, &mut rng, 6, 5));
        let w = Window::new(12).unwrap();
        for p in [a.mul(&x).unwrap(), x.mul(&a).unwrap(), a.bracket(&x).unwrap()] {
            prop_assert_eq!(p.class(), MatrixClass::Finite);
            let f = p.as_finite().unwrap();
            prop_assert_eq!(f.restrict(w), p.window_of(w));
        }
    }

    #[test]
    fn bracket_with_finite_is_traceless(seed in any::<u64>()) {
        let ring = Mat2::new(3).unwrap();
        let oracle = SlMembershipOracle::new(&ring).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::Finite(random_finite(&ring, &mut rng, 5, 6)).add(&Operator::shift(&ring).into()).unwrap();
        let x = Matrix::Finite(random_finite(&ring, &mut rng, 5, 6));
        let b = a.bracket(&x).unwrap();
        prop_assert!(sl_member(b.as_finite().unwrap(), &oracle).unwrap());
    }

    #[test]
    fn split_is_stable_under_nested_windows(seed in any::<u64>(), n in 2usize..6, extra in 1usize..4) {
        let ring = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = MatrixDerivation::inner(Ambient::Rcf, rcf_sample(&ring, &mut rng)).unwrap();
        let small = decompose(&d, Window::new(n).unwrap(), seed, 3, 0);
        let big = decompose(&d, Window::new(n + extra).unwrap(), seed, 3, 0);
        prop_assert_eq!(&small.status, &Status::Decomposed);
        prop_assert_eq!(&big.status, &Status::Decomposed);
        prop_assert_eq!(&small.v_offdiag, &big.v_offdiag.restrict(Window::new(n).unwrap()));
        prop_assert_eq!(&small.correction[..], &big.correction[..n]);
        // over Z the residual is always zero
        let u = big.residual.unwrap();
        prop_assert!(sample_elements(&ring, seed, 10).iter().all(|x| u.apply(x) == BigInt::from(0)));
    }

    #[test]
    fn lifts_have_no_inner_part(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = PolyZ;
        let mut cat = ring.derivation_catalog(&mut rng);
        let u = cat.swap_remove(rng.gen_range(0..cat.len()));
        let d = MatrixDerivation::lift(Ambient::Inf, u);
        prop_assert!(extract_v(&d, Window::new(n).unwrap()).unwrap().is_empty());
        prop_assert!(validate_derivation(&d, Window::new(n).unwrap(), seed, 3).is_empty());
    }

    #[test]
    fn lift_respects_brackets(seed in any::<u64>(), i in 0usize..4, j in 0usize..4) {
        let m = Mat2::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u1 = inner_ring_derivation(&m, &m.random_element(&mut rng, 2)).unwrap();
        let u2 = inner_ring_derivation(&m, &m.random_element(&mut rng, 2)).unwrap();
        let d = MatrixDerivation::lift(Ambient::Inf, u1.bracket(&u2));
        let r = m.random_element(&mut rng, 2);
        let want = m.sub(&u1.apply(&u2.apply(&r)), &u2.apply(&u1.apply(&r)));
        let got = d.eval_unit(i, j, &r);
        prop_assert_eq!(got.window_of(Window::new(4).unwrap()), FiniteMatrix::unit(&m, i, j, want));
    }

    #[test]
    fn lie_extraction_ignores_the_reservoir(seed in any::<u64>(), r1 in 8usize..20, r2 in 8usize..20) {
        let ring = IntegersMod::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::Finite(random_finite(&ring, &mut rng, 4, 5)).add(&Operator::shift(&ring).into()).unwrap();
        let d = LieDerivation::ad(LieAmbient::SlInf, a.clone()).unwrap();
        let w = Window::new(4).unwrap();
        let v1 = lie_extract_offdiag(&d, w, r1).unwrap();
        let v2 = lie_extract_offdiag(&d, w, r2).unwrap();
        prop_assert_eq!(&v1, &v2);
        let off = FiniteMatrix::from_entries(&ring, a.window_of(w).iter().filter(|(i, j, _)| i != j).map(|(i, j, r)| (i, j, *r)));
        prop_assert_eq!(&v1, &off);
        let p = LieProbe::DiagDiff(0, r1);
        prop_assert!(d.eval(&p).as_finite().is_some());
    }
}

#[test]
fn rcf_accessors_are_consistent() {
    let ring = Integers;
    for n in 1..12 {
        let w = Window::new(n).unwrap();
        assert!(is_rcf_consistent_on_window(&Operator::shift(&ring), w));
        assert!(is_rcf_consistent_on_window(&Operator::identity(&ring), w));
        assert!(is_rcf_consistent_on_window(&Operator::diag(&ring, "d", |i| BigInt::from(i * i)), w));
    }
    let liar = Operator::from_accessors(
        &ring,
        "liar",
        |j| vec![(j + 1, BigInt::from(1))],
        Some(|i: Index| vec![(i, BigInt::from(1))]),
    );
    assert!(!is_rcf_consistent_on_window(&liar, Window::new(4).unwrap()));
}
