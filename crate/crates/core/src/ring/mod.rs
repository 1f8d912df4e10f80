//! Exact unital coefficient rings.
//!
//! A [`Ring`] is a descriptor object: it owns the operations and the
//! elements are plain values. Several descriptors may share an element type
//! (every `Z/n` uses `u64` residues), so element membership is checked with
//! [`Ring::contains`] wherever a mix-up would otherwise go unnoticed.

mod derivation;
mod integers;
mod mat2;
mod modular;
mod poly;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagnostic::Diagnostic;

pub use derivation::{check_derivation_law, inner_ring_derivation, CoefficientDerivation};
pub use integers::Integers;
pub use mat2::{Mat2, Mat2Elem};
pub use modular::IntegersMod;
pub use poly::{formal_derivative, PolyZ};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("cannot parse {text:?} as an element of {ring}: {reason}")]
    Parse {
        ring: String,
        text: String,
        reason: String,
    },
    #[error("element {element} does not belong to {ring}")]
    ForeignElement { ring: String, element: String },
    #[error("unknown ring specification {0:?} (expected Z, Z/<n>, Z[t] or M2(Z/<p>))")]
    UnknownSpec(String),
    #[error("invalid ring parameter: {0}")]
    InvalidParameter(String),
}

/// A unital associative ring with exact, total operations.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    /// Specification string, e.g. `Z/6` or `M2(Z/3)`.
    fn name(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    fn is_commutative(&self) -> bool;

    /// An element `h` with `h + h = 1`, when one exists.
    fn half(&self) -> Option<Self::Elem> {
        None
    }

    /// Membership in the additive span of all commutators `ab - ba`.
    /// `None` when the ring has no decision procedure for it.
    fn in_commutator_span(&self, _r: &Self::Elem) -> Option<bool> {
        None
    }

    /// Whether `r` is a well-formed element of this particular ring.
    fn contains(&self, _r: &Self::Elem) -> bool {
        true
    }

    /// Elements every sample stream starts with: zero, one and, for
    /// noncommutative rings, at least one non-central element.
    fn special_elements(&self) -> Vec<Self::Elem>;

    fn random_element(&self, rng: &mut ChaCha8Rng, size: u32) -> Self::Elem;

    fn format(&self, r: &Self::Elem) -> String;
    fn parse(&self, text: &str) -> Result<Self::Elem, RingError>;

    /// All elements, for rings small enough to enumerate.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Built-in derivations of this ring; `rng` parametrizes families.
    fn derivation_catalog(&self, rng: &mut ChaCha8Rng) -> Vec<CoefficientDerivation<Self>>;

    /// Ring-specific recognition of a derivation from its values.
    /// Called only after the zero derivation has been ruled out.
    fn recognize_derivation(
        &self,
        _apply: &dyn Fn(&Self::Elem) -> Self::Elem,
        _samples: &[Self::Elem],
    ) -> Option<String> {
        None
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.equal(a, &self.zero())
    }

    /// The image of `k` under `Z -> R`, `k ↦ k·1`.
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, k: i64) -> Self::Elem {
        let unit = if k < 0 { self.neg(&self.one()) } else { self.one() };
        let mut acc = self.zero();
        // double-and-add keeps this cheap for large multiples
        let mut base = unit;
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            m >>= 1;
        }
        acc
    }

    fn mul_int(&self, k: i64, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_int(k), a)
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn ensure_contains(&self, r: &Self::Elem) -> Result<(), RingError> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(RingError::ForeignElement {
                ring: self.name(),
                element: format!("{r:?}"),
            })
        }
    }
}

/// `rs - sr`.
pub fn commutator<R: Ring>(ring: &R, r: &R::Elem, s: &R::Elem) -> Result<R::Elem, RingError> {
    ring.ensure_contains(r)?;
    ring.ensure_contains(s)?;
    Ok(ring.sub(&ring.mul(r, s), &ring.mul(s, r)))
}

/// Deterministic sample stream: the ring's special elements first, then
/// seeded random draws of bounded size.
pub fn sample_elements<R: Ring>(ring: &R, seed: u64, count: usize) -> Vec<R::Elem> {
    let mut out: Vec<R::Elem> = ring.special_elements().into_iter().take(count).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let size = rng.gen_range(1..=4);
        out.push(ring.random_element(&mut rng, size));
    }
    out
}

/// Samples the ring axioms on seeded triples. An empty list means every
/// sampled instance held.
pub fn check_ring_axioms<R: Ring>(ring: &R, seed: u64, trials: usize) -> Vec<Diagnostic> {
    let pool = sample_elements(ring, seed, trials.max(12));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_a110);
    let mut diags = Vec::new();
    let zero = ring.zero();
    let one = ring.one();
    let show = |xs: &[&R::Elem]| {
        xs.iter()
            .map(|x| ring.format(x))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut fail = |axiom: &str, witness: String| {
        if !diags.iter().any(|d: &Diagnostic| d.check == axiom) {
            diags.push(Diagnostic::new(axiom, witness));
        }
    };

    if let Some(h) = ring.half() {
        if !ring.equal(&ring.add(&h, &h), &one) {
            fail("half", format!("h = {}", ring.format(&h)));
        }
    }

    for t in 0..trials {
        let (a, b, c) = if t == 0 {
            (&pool[0], &pool[1 % pool.len()], &pool[2 % pool.len()])
        } else {
            (
                &pool[rng.gen_range(0..pool.len())],
                &pool[rng.gen_range(0..pool.len())],
                &pool[rng.gen_range(0..pool.len())],
            )
        };
        let w = show(&[a, b, c]);

        if !ring.equal(a, a) || ring.equal(a, b) != ring.equal(b, a) {
            fail("equality", w.clone());
        }
        if !ring.equal(&ring.add(&ring.add(a, b), c), &ring.add(a, &ring.add(b, c))) {
            fail("additive associativity", w.clone());
        }
        if !ring.equal(&ring.add(a, b), &ring.add(b, a)) {
            fail("additive commutativity", w.clone());
        }
        if !ring.equal(&ring.add(a, &zero), a) {
            fail("additive identity", w.clone());
        }
        if !ring.equal(&ring.add(a, &ring.neg(a)), &zero) {
            fail("additive inverse", w.clone());
        }
        if !ring.equal(&ring.mul(&ring.mul(a, b), c), &ring.mul(a, &ring.mul(b, c))) {
            fail("multiplicative associativity", w.clone());
        }
        if !ring.equal(
            &ring.mul(a, &ring.add(b, c)),
            &ring.add(&ring.mul(a, b), &ring.mul(a, c)),
        ) || !ring.equal(
            &ring.mul(&ring.add(a, b), c),
            &ring.add(&ring.mul(a, c), &ring.mul(b, c)),
        ) {
            fail("distributivity", w.clone());
        }
        if !ring.equal(&ring.mul(&one, a), a) || !ring.equal(&ring.mul(a, &one), a) {
            fail("multiplicative identity", w.clone());
        }
        if ring.is_commutative() && !ring.equal(&ring.mul(a, b), &ring.mul(b, a)) {
            fail("commutativity flag", w.clone());
        }
    }
    diags
}

/// Ring specification strings accepted by scenario files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    IntegersMod(u64),
    PolyZ,
    Mat2(u64),
}

impl RingSpec {
    pub fn parse(spec: &str) -> Result<Self, RingError> {
        let s = spec.trim();
        let modulus = |digits: &str| -> Result<u64, RingError> {
            digits
                .parse::<u64>()
                .map_err(|_| RingError::UnknownSpec(spec.to_string()))
        };
        if s == "Z" {
            Ok(RingSpec::Integers)
        } else if s == "Z[t]" {
            Ok(RingSpec::PolyZ)
        } else if let Some(n) = s.strip_prefix("Z/") {
            let n = modulus(n)?;
            IntegersMod::new(n)?;
            Ok(RingSpec::IntegersMod(n))
        } else if let Some(p) = s.strip_prefix("M2(Z/").and_then(|r| r.strip_suffix(')')) {
            let p = modulus(p)?;
            Mat2::new(p)?;
            Ok(RingSpec::Mat2(p))
        } else {
            Err(RingError::UnknownSpec(spec.to_string()))
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::IntegersMod(n) => write!(f, "Z/{n}"),
            RingSpec::PolyZ => write!(f, "Z[t]"),
            RingSpec::Mat2(p) => write!(f, "M2(Z/{p})"),
        }
    }
}

/// Parses a bracketed, comma separated list of integer literals.
pub(crate) fn parse_int_list(text: &str) -> Option<Vec<&str>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    Some(inner.split(',').map(str::trim).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_spec_strings() {
        assert_eq!(RingSpec::parse("Z").unwrap(), RingSpec::Integers);
        assert_eq!(RingSpec::parse("Z/6").unwrap(), RingSpec::IntegersMod(6));
        assert_eq!(RingSpec::parse("Z[t]").unwrap(), RingSpec::PolyZ);
        assert_eq!(RingSpec::parse("M2(Z/3)").unwrap(), RingSpec::Mat2(3));
        assert!(RingSpec::parse("Q").is_err());
        assert!(RingSpec::parse("Z/1").is_err());
        assert!(RingSpec::parse("M2(Z/4)").is_err());
        for s in ["Z", "Z/6", "Z[t]", "M2(Z/5)"] {
            assert_eq!(RingSpec::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn commutator_examples() {
        let z = Integers;
        assert_eq!(
            commutator(&z, &3.into(), &5.into()).unwrap(),
            num_bigint::BigInt::from(0)
        );
        let m = Mat2::new(3).unwrap();
        let e12 = m.parse("[[0,1],[0,0]]").unwrap();
        let e21 = m.parse("[[0,0],[1,0]]").unwrap();
        let c = commutator(&m, &e12, &e21).unwrap();
        assert_eq!(m.format(&c), "[[1,0],[0,2]]");
        assert!(m.is_zero(&commutator(&m, &e12, &e12).unwrap()));
    }

    #[test]
    fn commutator_rejects_foreign_elements() {
        let z4 = IntegersMod::new(4).unwrap();
        // residue 5 is a Z/6 element, not a Z/4 one
        assert!(matches!(
            commutator(&z4, &5, &1),
            Err(RingError::ForeignElement { .. })
        ));
    }

    #[test]
    fn builtin_rings_satisfy_axioms() {
        for seed in 0..5 {
            assert!(check_ring_axioms(&Integers, seed, 200).is_empty());
            assert!(check_ring_axioms(&IntegersMod::new(6).unwrap(), seed, 200).is_empty());
            assert!(check_ring_axioms(&IntegersMod::new(2).unwrap(), seed, 200).is_empty());
            assert!(check_ring_axioms(&PolyZ, seed, 200).is_empty());
            assert!(check_ring_axioms(&Mat2::new(3).unwrap(), seed, 200).is_empty());
            assert!(check_ring_axioms(&Mat2::new(5).unwrap(), seed, 200).is_empty());
        }
    }

    /// Integers with multiplication replaced by the constant one.
    #[derive(Debug, Clone, PartialEq)]
    struct BrokenMul;

    impl Ring for BrokenMul {
        type Elem = num_bigint::BigInt;
        fn name(&self) -> String {
            "broken".into()
        }
        fn zero(&self) -> Self::Elem {
            Integers.zero()
        }
        fn one(&self) -> Self::Elem {
            Integers.one()
        }
        fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
            Integers.add(a, b)
        }
        fn neg(&self, a: &Self::Elem) -> Self::Elem {
            Integers.neg(a)
        }
        fn mul(&self, _: &Self::Elem, _: &Self::Elem) -> Self::Elem {
            Integers.one()
        }
        fn is_commutative(&self) -> bool {
            true
        }
        fn special_elements(&self) -> Vec<Self::Elem> {
            Integers.special_elements()
        }
        fn random_element(&self, rng: &mut ChaCha8Rng, size: u32) -> Self::Elem {
            Integers.random_element(rng, size)
        }
        fn format(&self, r: &Self::Elem) -> String {
            Integers.format(r)
        }
        fn parse(&self, text: &str) -> Result<Self::Elem, RingError> {
            Integers.parse(text)
        }
        fn derivation_catalog(&self, _: &mut ChaCha8Rng) -> Vec<CoefficientDerivation<Self>> {
            Vec::new()
        }
    }

    #[test]
    fn broken_multiplication_is_caught() {
        let diags = check_ring_axioms(&BrokenMul, 1, 200);
        let dist = diags
            .iter()
            .find(|d| d.check == "distributivity")
            .expect("distributivity violation");
        // the first triple is (0, 1, -1): 0*(1 + -1) = 1 but 0*1 + 0*(-1) = 2
        assert!(!dist.witness.is_empty());
    }

    #[test]
    fn half_presence() {
        assert!(Integers.half().is_none());
        assert!(PolyZ.half().is_none());
        assert!(IntegersMod::new(6).unwrap().half().is_none());
        assert_eq!(IntegersMod::new(7).unwrap().half(), Some(4));
        assert!(Mat2::new(3).unwrap().half().is_some());
        assert!(Mat2::new(2).unwrap().half().is_none());
    }

    #[test]
    fn samples_cover_special_elements() {
        let m = Mat2::new(3).unwrap();
        for seed in 0..20 {
            let s = sample_elements(&m, seed, 10);
            assert!(s.contains(&m.zero()));
            assert!(s.contains(&m.one()));
            assert!(s
                .iter()
                .any(|x| s.iter().any(|y| m.mul(x, y) != m.mul(y, x))));
        }
        assert_eq!(sample_elements(&PolyZ, 9, 30), sample_elements(&PolyZ, 9, 30));
    }

    #[test]
    fn from_int_matches_repeated_addition() {
        let z6 = IntegersMod::new(6).unwrap();
        assert_eq!(z6.from_int(-1), 5);
        assert_eq!(z6.from_int(13), 1);
        assert_eq!(Integers.from_int(-9), (-9).into());
    }
}
