use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{parse_int_list, CoefficientDerivation, Ring, RingError};

/// `Z[t]`. Elements are degree-ascending coefficient vectors with trailing
/// zeros stripped, so the zero polynomial is the empty vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PolyZ;

fn strip(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

impl PolyZ {
    pub fn t(&self) -> Vec<BigInt> {
        vec![BigInt::zero(), BigInt::one()]
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Vec<BigInt> {
        strip(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn derivative(&self, p: &[BigInt]) -> Vec<BigInt> {
        strip(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }
}

impl Ring for PolyZ {
    type Elem = Vec<BigInt>;

    fn name(&self) -> String {
        "Z[t]".into()
    }

    fn zero(&self) -> Vec<BigInt> {
        Vec::new()
    }

    fn one(&self) -> Vec<BigInt> {
        vec![BigInt::one()]
    }

    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.clone();
        for (x, y) in out.iter_mut().zip(short) {
            *x += y;
        }
        strip(out)
    }

    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().map(|c| -c).collect()
    }

    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        strip(out)
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn in_commutator_span(&self, r: &Vec<BigInt>) -> Option<bool> {
        Some(r.is_empty())
    }

    fn contains(&self, r: &Vec<BigInt>) -> bool {
        r.last().is_none_or(|c| !c.is_zero())
    }

    fn special_elements(&self) -> Vec<Vec<BigInt>> {
        vec![self.zero(), self.one(), self.t(), self.from_coeffs(&[-1, 0, 2])]
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, size: u32) -> Vec<BigInt> {
        let degree = rng.gen_range(0..=size as usize);
        let bound = 3 * size as i64;
        strip(
            (0..=degree)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect(),
        )
    }

    fn from_int(&self, k: i64) -> Vec<BigInt> {
        strip(vec![BigInt::from(k)])
    }

    fn format(&self, r: &Vec<BigInt>) -> String {
        let body: Vec<String> = r.iter().map(ToString::to_string).collect();
        format!("[{}]", body.join(","))
    }

    fn parse(&self, text: &str) -> Result<Vec<BigInt>, RingError> {
        let err = |reason: &str| RingError::Parse {
            ring: self.name(),
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let items = parse_int_list(text).ok_or_else(|| err("expected [c0,c1,...]"))?;
        let coeffs = items
            .into_iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| err(&e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(strip(coeffs))
    }

    fn derivation_catalog(&self, rng: &mut ChaCha8Rng) -> Vec<CoefficientDerivation<Self>> {
        // every derivation of Z[t] is p(t)·d/dt
        let p = self.random_element(rng, 2);
        vec![
            CoefficientDerivation::zero(self),
            formal_derivative(),
            scaled_derivative(p),
        ]
    }

    fn recognize_derivation(
        &self,
        apply: &dyn Fn(&Vec<BigInt>) -> Vec<BigInt>,
        samples: &[Vec<BigInt>],
    ) -> Option<String> {
        let p = apply(&self.t());
        let fits = samples
            .iter()
            .all(|x| apply(x) == self.mul(&p, &self.derivative(x)));
        if !fits {
            return None;
        }
        Some(if p == self.one() {
            "d/dt".to_string()
        } else {
            format!("{}*d/dt", self.format(&p))
        })
    }
}

/// The formal derivative `d/dt` on `Z[t]`.
pub fn formal_derivative() -> CoefficientDerivation<PolyZ> {
    CoefficientDerivation::new(&PolyZ, "d/dt", |p: &Vec<BigInt>| PolyZ.derivative(p))
}

fn scaled_derivative(p: Vec<BigInt>) -> CoefficientDerivation<PolyZ> {
    let name = format!("{}*d/dt", PolyZ.format(&p));
    CoefficientDerivation::new(&PolyZ, name, move |x: &Vec<BigInt>| {
        PolyZ.mul(&p, &PolyZ.derivative(x))
    })
}
