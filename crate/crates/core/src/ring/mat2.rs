use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{inner_ring_derivation, parse_int_list, CoefficientDerivation, Ring, RingError};

/// Row-major entries `[a, b, c, d]` of `[[a, b], [c, d]]`.
pub type Mat2Elem = [u64; 4];

/// The full 2×2 matrix ring over the prime field `Z/p`; the built-in
/// noncommutative coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl Mat2 {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(RingError::InvalidParameter(format!(
                "M2 needs a prime modulus below 2^32, got {p}"
            )));
        }
        Ok(Mat2 { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn scalar(&self, k: u64) -> Mat2Elem {
        let k = k % self.p;
        [k, 0, 0, k]
    }

    pub fn trace(&self, m: &Mat2Elem) -> u64 {
        (m[0] + m[3]) % self.p
    }

    fn reduce(&self, k: i128) -> u64 {
        k.rem_euclid(self.p as i128) as u64
    }
}

impl Ring for Mat2 {
    type Elem = Mat2Elem;

    fn name(&self) -> String {
        format!("M2(Z/{})", self.p)
    }

    fn zero(&self) -> Mat2Elem {
        [0; 4]
    }

    fn one(&self) -> Mat2Elem {
        [1, 0, 0, 1]
    }

    fn add(&self, a: &Mat2Elem, b: &Mat2Elem) -> Mat2Elem {
        std::array::from_fn(|k| (a[k] + b[k]) % self.p)
    }

    fn neg(&self, a: &Mat2Elem) -> Mat2Elem {
        a.map(|x| (self.p - x) % self.p)
    }

    fn mul(&self, x: &Mat2Elem, y: &Mat2Elem) -> Mat2Elem {
        let p = self.p;
        let dot = |a: u64, b: u64, c: u64, d: u64| (a * b % p + c * d % p) % p;
        [
            dot(x[0], y[0], x[1], y[2]),
            dot(x[0], y[1], x[1], y[3]),
            dot(x[2], y[0], x[3], y[2]),
            dot(x[2], y[1], x[3], y[3]),
        ]
    }

    fn is_commutative(&self) -> bool {
        false
    }

    fn half(&self) -> Option<Mat2Elem> {
        (self.p % 2 == 1).then(|| self.scalar(self.p.div_ceil(2)))
    }

    /// Over a field the commutators of a full matrix ring span exactly
    /// the trace-zero matrices.
    fn in_commutator_span(&self, r: &Mat2Elem) -> Option<bool> {
        Some(self.trace(r) == 0)
    }

    fn contains(&self, r: &Mat2Elem) -> bool {
        r.iter().all(|&x| x < self.p)
    }

    fn special_elements(&self) -> Vec<Mat2Elem> {
        vec![
            self.zero(),
            self.one(),
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [1, 0, 0, 0],
        ]
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, _size: u32) -> Mat2Elem {
        std::array::from_fn(|_| rng.gen_range(0..self.p))
    }

    fn from_int(&self, k: i64) -> Mat2Elem {
        self.scalar(self.reduce(k as i128))
    }

    fn format(&self, r: &Mat2Elem) -> String {
        format!("[[{},{}],[{},{}]]", r[0], r[1], r[2], r[3])
    }

    fn parse(&self, text: &str) -> Result<Mat2Elem, RingError> {
        let err = |reason: String| RingError::Parse {
            ring: self.name(),
            text: text.to_string(),
            reason,
        };
        let outer = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| err("expected [[a,b],[c,d]]".into()))?;
        let split = outer
            .find("],")
            .ok_or_else(|| err("expected two rows".into()))?;
        let (first, second) = (&outer[..=split], &outer[split + 2..]);
        let mut entries = Vec::with_capacity(4);
        for row in [first, second] {
            let items = parse_int_list(row).ok_or_else(|| err("malformed row".into()))?;
            if items.len() != 2 {
                return Err(err("each row needs two entries".into()));
            }
            for item in items {
                let k: i128 = item.parse().map_err(|e: std::num::ParseIntError| err(e.to_string()))?;
                entries.push(self.reduce(k));
            }
        }
        Ok([entries[0], entries[1], entries[2], entries[3]])
    }

    fn elements(&self) -> Option<Vec<Mat2Elem>> {
        let p = self.p;
        if p > 7 {
            return None;
        }
        let mut out = Vec::with_capacity((p * p * p * p) as usize);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        Some(out)
    }

    fn derivation_catalog(&self, rng: &mut ChaCha8Rng) -> Vec<CoefficientDerivation<Self>> {
        let r = self.random_element(rng, 1);
        vec![
            CoefficientDerivation::zero(self),
            inner_ring_derivation(self, &r).expect("sampled element belongs to the ring"),
        ]
    }

    /// Every derivation of `M2` over a field is inner. A candidate `r`
    /// (normalized to `r[1][1] = 0`) is read off from the values at the
    /// matrix units `e11` and `e12` and then confirmed on the samples.
    fn recognize_derivation(
        &self,
        apply: &dyn Fn(&Mat2Elem) -> Mat2Elem,
        samples: &[Mat2Elem],
    ) -> Option<String> {
        // u(e11) = [[0,-b],[c,0]] and u(e12) = [[-c,a-d],[0,c]] for u = ad(r)
        let at_e11 = apply(&[1, 0, 0, 0]);
        let at_e12 = apply(&[0, 1, 0, 0]);
        let r = [at_e12[1], self.neg(&[at_e11[1], 0, 0, 0])[0], at_e11[2], 0];
        let fits = samples.iter().all(|x| {
            let expected = self.sub(&self.mul(&r, x), &self.mul(x, &r));
            apply(x) == expected
        });
        fits.then(|| format!("inner_ring({})", self.format(&r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_requires_prime() {
        assert!(Mat2::new(3).is_ok());
        assert!(Mat2::new(2).is_ok());
        assert!(Mat2::new(4).is_err());
        assert!(Mat2::new(1).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = Mat2::new(5).unwrap();
        let x = m.parse("[[1, -1],[7,0]]").unwrap();
        assert_eq!(x, [1, 4, 2, 0]);
        assert_eq!(m.format(&x), "[[1,4],[2,0]]");
        assert!(m.parse("[[1,2,3],[0,0]]").is_err());
        assert!(m.parse("[1,2]").is_err());
    }

    #[test]
    fn half_is_scalar() {
        let m = Mat2::new(3).unwrap();
        let h = m.half().unwrap();
        assert_eq!(m.add(&h, &h), m.one());
    }

    #[test]
    fn recognizes_inner_derivations() {
        let m = Mat2::new(3).unwrap();
        let samples = m.elements().unwrap();
        for r in m.elements().unwrap().iter().step_by(7) {
            let u = inner_ring_derivation(&m, r).unwrap();
            let name = m.recognize_derivation(&|x| u.apply(x), &samples);
            assert!(name.is_some(), "{r:?}");
        }
        // transpose is not a derivation
        assert!(m
            .recognize_derivation(&|x: &Mat2Elem| [x[0], x[2], x[1], x[3]], &samples)
            .is_none());
    }
}
