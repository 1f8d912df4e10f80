use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sample_elements, Ring, RingError};
use crate::diagnostic::Diagnostic;

type ApplyFn<E> = Arc<dyn Fn(&E) -> E + Send + Sync>;

/// A derivation `u` of a coefficient ring, given by its action.
///
/// Nothing is checked at construction; [`check_derivation_law`] samples the
/// additivity and Leibniz laws.
pub struct CoefficientDerivation<R: Ring> {
    ring: R,
    name: String,
    apply: ApplyFn<R::Elem>,
}

impl<R: Ring> Clone for CoefficientDerivation<R> {
    fn clone(&self) -> Self {
        CoefficientDerivation {
            ring: self.ring.clone(),
            name: self.name.clone(),
            apply: Arc::clone(&self.apply),
        }
    }
}

impl<R: Ring> fmt::Debug for CoefficientDerivation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientDerivation")
            .field("ring", &self.ring.name())
            .field("name", &self.name)
            .finish()
    }
}

impl<R: Ring> CoefficientDerivation<R> {
    pub fn new<F>(ring: &R, name: impl Into<String>, apply: F) -> Self
    where
        F: Fn(&R::Elem) -> R::Elem + Send + Sync + 'static,
    {
        CoefficientDerivation {
            ring: ring.clone(),
            name: name.into(),
            apply: Arc::new(apply),
        }
    }

    pub fn zero(ring: &R) -> Self {
        let zero = ring.zero();
        Self::new(ring, "zero", move |_| zero.clone())
    }

    pub fn apply(&self, r: &R::Elem) -> R::Elem {
        (self.apply)(r)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, ring) = (self.clone(), other.clone(), self.ring.clone());
        let name = format!("({} + {})", self.name, other.name);
        Self::new(&self.ring, name, move |x| ring.add(&a.apply(x), &b.apply(x)))
    }

    /// The commutator `u∘v - v∘u` of two derivations, again a derivation.
    pub fn bracket(&self, other: &Self) -> Self {
        let (a, b, ring) = (self.clone(), other.clone(), self.ring.clone());
        let name = format!("[{}, {}]", self.name, other.name);
        Self::new(&self.ring, name, move |x| {
            ring.sub(&a.apply(&b.apply(x)), &b.apply(&a.apply(x)))
        })
    }

    /// Names the derivation by its values on `samples`: `zero`, a
    /// ring-specific recognition, or `None`.
    pub fn recognize(&self, samples: &[R::Elem]) -> Option<String> {
        if samples.iter().all(|x| self.ring.is_zero(&self.apply(x))) {
            return Some("zero".to_string());
        }
        self.ring.recognize_derivation(&|x| self.apply(x), samples)
    }
}

/// The inner derivation `x ↦ rx - xr`.
pub fn inner_ring_derivation<R: Ring>(
    ring: &R,
    r: &R::Elem,
) -> Result<CoefficientDerivation<R>, RingError> {
    ring.ensure_contains(r)?;
    let (ring2, r2) = (ring.clone(), r.clone());
    let name = format!("inner_ring({})", ring.format(r));
    Ok(CoefficientDerivation::new(ring, name, move |x| {
        ring2.sub(&ring2.mul(&r2, x), &ring2.mul(x, &r2))
    }))
}

/// Samples additivity and the Leibniz rule on seeded pairs, and checks
/// `u(1) = 0`.
pub fn check_derivation_law<R: Ring>(
    u: &CoefficientDerivation<R>,
    seed: u64,
    trials: usize,
) -> Vec<Diagnostic> {
    let ring = u.ring();
    let pool = sample_elements(ring, seed, trials.max(10));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xde71_0a7e);
    let mut diags = Vec::new();

    let at_one = u.apply(&ring.one());
    if !ring.is_zero(&at_one) {
        diags.push(Diagnostic::new(
            "unit",
            format!("{}(1) = {}", u.name(), ring.format(&at_one)),
        ));
    }

    for t in 0..trials {
        let (a, b) = if t == 0 {
            (&pool[1], &pool[1])
        } else {
            (
                &pool[rng.gen_range(0..pool.len())],
                &pool[rng.gen_range(0..pool.len())],
            )
        };
        let (ua, ub) = (u.apply(a), u.apply(b));
        let sum = u.apply(&ring.add(a, b));
        if !ring.equal(&sum, &ring.add(&ua, &ub)) && !diags.iter().any(|d| d.check == "additivity") {
            diags.push(Diagnostic::new(
                "additivity",
                format!("a = {}, b = {}", ring.format(a), ring.format(b)),
            ));
        }
        let lhs = u.apply(&ring.mul(a, b));
        let rhs = ring.add(&ring.mul(&ua, b), &ring.mul(a, &ub));
        if !ring.equal(&lhs, &rhs) && !diags.iter().any(|d| d.check == "leibniz") {
            diags.push(Diagnostic::new(
                "leibniz",
                format!(
                    "a = {}, b = {}: u(ab) = {} but u(a)b + au(b) = {}",
                    ring.format(a),
                    ring.format(b),
                    ring.format(&lhs),
                    ring.format(&rhs)
                ),
            ));
        }
    }
    diags
}
