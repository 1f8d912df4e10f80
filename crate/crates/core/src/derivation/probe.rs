use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{Ambient, MatrixDerivation};
use crate::diagnostic::Diagnostic;
use crate::matrix::{Index, Matrix};
use crate::ring::Ring;

/// Why a pipeline stopped early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Halt {
    /// The probes contradict the derivation hypothesis.
    Refuted(Diagnostic),
    /// The black box misbehaved or the probe budget ran out.
    Inconclusive(String),
}

/// Guarded access to a black-box derivation: counts probes against a
/// budget, turns panics and malformed values into [`Halt::Inconclusive`],
/// and caches the values at `e_ij(1)`.
pub struct Prober<R: Ring> {
    d: MatrixDerivation<R>,
    calls: AtomicUsize,
    budget: usize,
    max_support: usize,
    failure: Mutex<Option<String>>,
    ones: Mutex<HashMap<(Index, Index), Matrix<R>>>,
}

impl<R: Ring> Prober<R> {
    pub fn new(d: &MatrixDerivation<R>, budget: usize, max_support: usize) -> Self {
        Prober {
            d: d.clone(),
            calls: AtomicUsize::new(0),
            budget,
            max_support,
            failure: Mutex::new(None),
            ones: Mutex::new(HashMap::new()),
        }
    }

    pub fn derivation(&self) -> &MatrixDerivation<R> {
        &self.d
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Probes still available.
    pub fn budget_left(&self) -> usize {
        self.budget.saturating_sub(self.calls())
    }

    /// The first black-box failure, if any.
    pub fn failure(&self) -> Option<String> {
        self.failure.lock().unwrap().clone()
    }

    fn fail(&self, reason: String) -> Halt {
        let mut slot = self.failure.lock().unwrap();
        let reason = slot.get_or_insert(reason).clone();
        Halt::Inconclusive(reason)
    }

    pub fn probe(&self, i: Index, j: Index, r: &R::Elem) -> Result<Matrix<R>, Halt> {
        if let Some(reason) = self.failure() {
            return Err(Halt::Inconclusive(reason));
        }
        let n = self.calls.fetch_add(1, Ordering::SeqCst) + 1;
        if n > self.budget {
            return Err(self.fail(format!("probe budget of {} exhausted", self.budget)));
        }
        let ring = self.d.ring();
        let value = catch_unwind(AssertUnwindSafe(|| self.d.eval_unit(i, j, r))).map_err(|_| {
            self.fail(format!("black box panicked at e_{i},{j}({})", ring.format(r)))
        })?;
        if value.ring() != ring {
            return Err(self.fail(format!("value at e_{i},{j} lies over {}", value.ring().name())));
        }
        match &value {
            Matrix::Operator(_) if self.d.ambient() == Ambient::Inf => Err(self.fail(format!(
                "value at e_{i},{j} is not finitely supported"
            ))),
            Matrix::Operator(op) if self.d.ambient() == Ambient::Rcf && !op.is_rcf() => Err(
                self.fail(format!("value at e_{i},{j} has no row accessor"))
            ),
            Matrix::Finite(m) if m.len() > self.max_support => Err(self.fail(format!(
                "value at e_{i},{j} has {} entries, over the limit of {}",
                m.len(),
                self.max_support
            ))),
            _ => Ok(value),
        }
    }

    /// `d(e_ij(1))`, cached.
    pub fn probe_one(&self, i: Index, j: Index) -> Result<Matrix<R>, Halt> {
        if let Some(hit) = self.ones.lock().unwrap().get(&(i, j)) {
            return Ok(hit.clone());
        }
        let value = self.probe(i, j, &self.d.ring().one())?;
        self.ones
            .lock()
            .unwrap()
            .entry((i, j))
            .or_insert_with(|| value.clone());
        Ok(value)
    }
}
