use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{CoefficientDerivation, Ring, RingError};

/// `Z/n` with residues stored in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegersMod {
    n: u64,
}

impl IntegersMod {
    pub fn new(n: u64) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::InvalidParameter(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        Ok(IntegersMod { n })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn reduce(&self, k: i128) -> u64 {
        k.rem_euclid(self.n as i128) as u64
    }
}

impl Ring for IntegersMod {
    type Elem = u64;

    fn name(&self) -> String {
        format!("Z/{}", self.n)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.n as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.n - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.n as u128) as u64
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn half(&self) -> Option<u64> {
        (self.n % 2 == 1).then(|| self.n.div_ceil(2))
    }

    fn in_commutator_span(&self, r: &u64) -> Option<bool> {
        Some(*r == 0)
    }

    fn contains(&self, r: &u64) -> bool {
        *r < self.n
    }

    fn special_elements(&self) -> Vec<u64> {
        vec![0, 1, self.n - 1]
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, _size: u32) -> u64 {
        rng.gen_range(0..self.n)
    }

    fn from_int(&self, k: i64) -> u64 {
        self.reduce(k as i128)
    }

    fn format(&self, r: &u64) -> String {
        r.to_string()
    }

    fn parse(&self, text: &str) -> Result<u64, RingError> {
        let k: i128 = text.trim().parse().map_err(|e: std::num::ParseIntError| {
            RingError::Parse {
                ring: self.name(),
                text: text.to_string(),
                reason: e.to_string(),
            }
        })?;
        Ok(self.reduce(k))
    }

    fn elements(&self) -> Option<Vec<u64>> {
        (self.n <= 1 << 16).then(|| (0..self.n).collect())
    }

    fn derivation_catalog(&self, _rng: &mut ChaCha8Rng) -> Vec<CoefficientDerivation<Self>> {
        vec![CoefficientDerivation::zero(self)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_parsing() {
        let z6 = IntegersMod::new(6).unwrap();
        assert_eq!(z6.add(&4, &5), 3);
        assert_eq!(z6.neg(&2), 4);
        assert_eq!(z6.mul(&4, &5), 2);
        assert_eq!(z6.parse("-1").unwrap(), 5);
        assert_eq!(z6.parse(" 13 ").unwrap(), 1);
        assert!(z6.parse("x").is_err());
        assert!(!z6.contains(&6));
        assert!(IntegersMod::new(1).is_err());
    }

    #[test]
    fn large_modulus_does_not_overflow() {
        let big = IntegersMod::new(u64::MAX - 58).unwrap();
        let a = u64::MAX - 60;
        assert_eq!(big.mul(&a, &a), 4);
        assert_eq!(big.add(&a, &a), u64::MAX - 62);
    }
}
