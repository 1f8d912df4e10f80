use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{LieDerivation, LieProbe};
use crate::derivation::{Ambient, Halt};
use crate::matrix::{Index, Matrix};
use crate::ring::Ring;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Unit(Index, Index),
    Diag(Index, Index),
}

/// Guarded access to a Lie black box; the Lie counterpart of
/// [`crate::derivation::Prober`].
pub struct LieProber<R: Ring> {
    d: LieDerivation<R>,
    calls: AtomicUsize,
    budget: usize,
    max_support: usize,
    failure: Mutex<Option<String>>,
    cache: Mutex<HashMap<Key, Matrix<R>>>,
}

impl<R: Ring> LieProber<R> {
    pub fn new(d: &LieDerivation<R>, budget: usize, max_support: usize) -> Self {
        LieProber {
            d: d.clone(),
            calls: AtomicUsize::new(0),
            budget,
            max_support,
            failure: Mutex::new(None),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn derivation(&self) -> &LieDerivation<R> {
        &self.d
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn budget_left(&self) -> usize {
        self.budget.saturating_sub(self.calls())
    }

    pub fn failure(&self) -> Option<String> {
        self.failure.lock().unwrap().clone()
    }

    fn fail(&self, reason: String) -> Halt {
        let mut slot = self.failure.lock().unwrap();
        Halt::Inconclusive(slot.get_or_insert(reason).clone())
    }

    pub fn probe(&self, p: &LieProbe<R>) -> Result<Matrix<R>, Halt> {
        if let Some(reason) = self.failure() {
            return Err(Halt::Inconclusive(reason));
        }
        let ring = self.d.ring();
        let what = p.describe(ring);
        if !p.belongs_to(self.d.ambient()) {
            return Err(self.fail(format!("{what} is not an element of {}", self.d.ambient())));
        }
        if self.calls.fetch_add(1, Ordering::SeqCst) + 1 > self.budget {
            return Err(self.fail(format!("probe budget of {} exhausted", self.budget)));
        }
        let value = catch_unwind(AssertUnwindSafe(|| self.d.eval(p)))
            .map_err(|_| self.fail(format!("black box panicked at {what}")))?;
        if value.ring() != ring {
            return Err(self.fail(format!("value at {what} lies over {}", value.ring().name())));
        }
        match (&value, self.d.ambient().associative()) {
            (Matrix::Operator(_), Ambient::Inf) => {
                Err(self.fail(format!("value at {what} is not finitely supported")))
            }
            (Matrix::Operator(op), Ambient::Rcf) if !op.is_rcf() => {
                Err(self.fail(format!("value at {what} has no row accessor")))
            }
            (Matrix::Finite(m), _) if m.len() > self.max_support => Err(self.fail(format!(
                "value at {what} has {} entries, over the limit of {}",
                m.len(),
                self.max_support
            ))),
            _ => Ok(value),
        }
    }

    fn cached(&self, key: Key, p: LieProbe<R>) -> Result<Matrix<R>, Halt> {
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let value = self.probe(&p)?;
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    /// `D(e_ij(1))`, cached.
    pub fn unit_one(&self, i: Index, j: Index) -> Result<Matrix<R>, Halt> {
        self.cached(Key::Unit(i, j), LieProbe::Unit(i, j, self.d.ring().one()))
    }

    /// `D(e_kk(1) - e_ww(1))`, cached.
    pub fn diag_diff(&self, k: Index, w: Index) -> Result<Matrix<R>, Halt> {
        self.cached(Key::Diag(k, w), LieProbe::DiagDiff(k, w))
    }
}
