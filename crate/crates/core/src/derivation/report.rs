use serde_json::{json, Map, Value};

use crate::matrix::{triples_json, FiniteMatrix, Index, Matrix, Window};
use crate::ring::{CoefficientDerivation, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub outcome: Outcome,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// Every check passed on the window.
    Decomposed,
    /// A check failed; the string names it and its witness.
    Refuted(String),
    /// The black box misbehaved or the budget ran out.
    Inconclusive(String),
    /// A hypothesis of the pipeline does not hold for the ring.
    Unsupported(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Decomposed => "decomposed",
            Status::Refuted(_) => "refuted",
            Status::Inconclusive(_) => "inconclusive",
            Status::Unsupported(_) => "unsupported",
        }
    }

    pub fn detail(&self) -> Option<&str> {
        match self {
            Status::Decomposed => None,
            Status::Refuted(s) | Status::Inconclusive(s) | Status::Unsupported(s) => Some(s),
        }
    }

    /// Process exit code for the scenario runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Decomposed => 0,
            Status::Refuted(_) => 2,
            Status::Inconclusive(_) | Status::Unsupported(_) => 3,
        }
    }
}

/// Result of a decomposition run. All claims hold on `window` only.
#[derive(Debug, Clone)]
pub struct DecompositionReport<R: Ring> {
    pub ring: R,
    /// `M_inf`, `M_rcf`, `M_full`, `sl_inf`, `gl` or `gl_rcf`.
    pub ambient: String,
    pub window: Window,
    pub i0: Index,
    pub reservoir: Option<Index>,
    /// Off-diagonal part of the inner matrix on the window.
    pub v_offdiag: FiniteMatrix<R>,
    /// The whole off-diagonal part, when the derivation was built from parts.
    pub v_operator: Option<Matrix<R>>,
    /// `c(i)` for `i < window.bound()`; `c(i0) = 0`.
    pub correction: Vec<R::Elem>,
    pub residual: Option<CoefficientDerivation<R>>,
    pub residual_description: String,
    pub residual_samples: Vec<(R::Elem, R::Elem)>,
    pub checks: Vec<CheckOutcome>,
    pub status: Status,
    pub notes: Vec<String>,
    pub applicability: Option<String>,
    pub probes: usize,
}

impl<R: Ring> DecompositionReport<R> {
    pub(crate) fn empty(ring: &R, ambient: &str, window: Window, i0: Index) -> Self {
        DecompositionReport {
            ring: ring.clone(),
            ambient: ambient.to_string(),
            window,
            i0,
            reservoir: None,
            v_offdiag: FiniteMatrix::zero(ring),
            v_operator: None,
            correction: Vec::new(),
            residual: None,
            residual_description: "none".to_string(),
            residual_samples: Vec::new(),
            checks: Vec::new(),
            status: Status::Inconclusive("not run".to_string()),
            notes: Vec::new(),
            applicability: None,
            probes: 0,
        }
    }

    pub fn is_decomposed(&self) -> bool {
        self.status == Status::Decomposed
    }

    pub fn check(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }

    pub(crate) fn record(&mut self, name: &str, outcome: Outcome) {
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == name) {
            c.outcome = outcome;
        } else {
            self.checks.push(CheckOutcome {
                name: name.to_string(),
                outcome,
            });
        }
    }

    /// Orders the checks as `expected`, marking the missing ones skipped.
    pub(crate) fn finish_checks(&mut self, expected: &[&str]) {
        let mut ordered = Vec::with_capacity(expected.len());
        for name in expected {
            let outcome = self
                .check(name)
                .cloned()
                .unwrap_or_else(|| Outcome::Skipped("not reached".to_string()));
            ordered.push(CheckOutcome {
                name: name.to_string(),
                outcome,
            });
        }
        for extra in &self.checks {
            if !expected.contains(&extra.name.as_str()) {
                ordered.push(extra.clone());
            }
        }
        self.checks = ordered;
    }

    /// `v + diag(c)` assembled from the window tables.
    pub fn inner_table(&self) -> FiniteMatrix<R> {
        let diag = FiniteMatrix::from_entries(
            &self.ring,
            self.correction
                .iter()
                .enumerate()
                .map(|(i, c)| (i, i, c.clone())),
        );
        self.v_offdiag.add(&diag).expect("same ring")
    }

    pub fn to_json(&self) -> Value {
        let ring = &self.ring;
        let mut checks = Map::new();
        for c in &self.checks {
            let text = match &c.outcome {
                Outcome::Pass => "pass".to_string(),
                Outcome::Fail(w) => format!("fail: {w}"),
                Outcome::Skipped(why) => format!("skipped: {why}"),
            };
            checks.insert(c.name.clone(), Value::String(text));
        }
        let mut out = json!({
            "ambient": self.ambient,
            "checks": checks,
            "correction": self
                .correction
                .iter()
                .enumerate()
                .map(|(i, c)| json!([i, ring.format(c)]))
                .collect::<Vec<_>>(),
            "i0": self.i0,
            "notes": self.notes,
            "probes": self.probes,
            "residual": self.residual_description,
            "residual_samples": self
                .residual_samples
                .iter()
                .map(|(r, u)| json!([ring.format(r), ring.format(u)]))
                .collect::<Vec<_>>(),
            "ring": ring.name(),
            "status": self.status.label(),
            "v_entries": triples_json(&self.v_offdiag),
            "window": self.window.bound(),
        });
        let obj = out.as_object_mut().expect("object");
        if let Some(detail) = self.status.detail() {
            obj.insert("status_detail".into(), Value::String(detail.to_string()));
        }
        if let Some(a) = &self.applicability {
            obj.insert("applicability".into(), Value::String(a.clone()));
        }
        if let Some(w) = self.reservoir {
            obj.insert("reservoir".into(), json!(w));
        }
        out
    }
}
