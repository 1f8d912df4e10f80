use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{CoefficientDerivation, Ring, RingError};

/// The integers, arbitrary precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn name(&self) -> String {
        "Z".into()
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn in_commutator_span(&self, r: &BigInt) -> Option<bool> {
        Some(r.is_zero())
    }

    fn special_elements(&self) -> Vec<BigInt> {
        vec![0.into(), 1.into(), (-1).into(), 2.into()]
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, size: u32) -> BigInt {
        let bound = 10i64.pow(size.min(12));
        rng.gen_range(-bound..=bound).into()
    }

    fn from_int(&self, k: i64) -> BigInt {
        k.into()
    }

    fn format(&self, r: &BigInt) -> String {
        r.to_string()
    }

    fn parse(&self, text: &str) -> Result<BigInt, RingError> {
        text.trim().parse::<BigInt>().map_err(|e| RingError::Parse {
            ring: self.name(),
            text: text.to_string(),
            reason: e.to_string(),
        })
    }

    fn derivation_catalog(&self, _rng: &mut ChaCha8Rng) -> Vec<CoefficientDerivation<Self>> {
        // additivity forces u(k) = k·u(1) = 0
        vec![CoefficientDerivation::zero(self)]
    }
}
