//! Lie-ring layer: derivations of `sl_∞`, `gl` and `gl_rcf` presented on
//! generator probes, and their decomposition `D = ad(a) + u` when `½ ∈ R`.
//!
//! `sl_∞` contains no diagonal matrix units, so its probes are the
//! off-diagonal units `e_ij(r)` and the diagonal differences
//! `e_kk(1) - e_ww(1)`. Off-diagonal columns of the inner part are read
//! from `D(e_kk(1) - e_ww(1))` with `w` a reservoir index outside the
//! window.

mod pipeline;
mod probe;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::derivation::{Ambient, DerivationError, MatrixDerivation, Provenance};
use crate::matrix::{FiniteMatrix, Index, Matrix};
use crate::ring::{CoefficientDerivation, Ring};

pub use pipeline::{lie_decompose, lie_extract_offdiag, lie_validate, LieDecomposeConfig};
pub use probe::LieProber;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("{0}")]
    Unsupported(String),
    #[error("Lie derivations act on different rings or ambients: {0}")]
    Mismatch(String),
    #[error("ad(a) on {ambient} needs a row-and-column-finite a; {label} is only column-finite")]
    NotRowFinite { ambient: LieAmbient, label: String },
    #[error("{0}")]
    Derivation(#[from] DerivationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LieAmbient {
    /// `sl_∞(I, R) = [gl_∞, gl_∞]`.
    SlInf,
    /// `gl(I, R)`, column-finite matrices under the commutator.
    Gl,
    /// `gl_rcf(I, R)`.
    GlRcf,
}

impl LieAmbient {
    pub fn name(&self) -> &'static str {
        match self {
            LieAmbient::SlInf => "sl_inf",
            LieAmbient::Gl => "gl",
            LieAmbient::GlRcf => "gl_rcf",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sl_inf" => Some(LieAmbient::SlInf),
            "gl" => Some(LieAmbient::Gl),
            "gl_rcf" => Some(LieAmbient::GlRcf),
            _ => None,
        }
    }

    /// The associative ambient whose elements are evaluated on.
    fn associative(&self) -> Ambient {
        match self {
            LieAmbient::SlInf => Ambient::Inf,
            LieAmbient::Gl => Ambient::Full,
            LieAmbient::GlRcf => Ambient::Rcf,
        }
    }
}

impl fmt::Display for LieAmbient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A generator a Lie derivation is evaluated on.
#[derive(Debug, Clone, PartialEq)]
pub enum LieProbe<R: Ring> {
    /// `e_ij(r)`; off-diagonal only in `sl_inf`.
    Unit(Index, Index, R::Elem),
    /// `e_kk(1) - e_ww(1)`.
    DiagDiff(Index, Index),
}

impl<R: Ring> LieProbe<R> {
    pub fn matrix(&self, ring: &R) -> FiniteMatrix<R> {
        match self {
            LieProbe::Unit(i, j, r) => FiniteMatrix::unit(ring, *i, *j, r.clone()),
            LieProbe::DiagDiff(k, w) => {
                FiniteMatrix::from_entries(ring, [(*k, *k, ring.one()), (*w, *w, ring.neg(&ring.one()))])
            }
        }
    }

    pub fn describe(&self, ring: &R) -> String {
        match self {
            LieProbe::Unit(i, j, r) => format!("e_{i},{j}({})", ring.format(r)),
            LieProbe::DiagDiff(k, w) => format!("e_{k},{k}(1) - e_{w},{w}(1)"),
        }
    }

    /// Whether the probe is an element of the ambient.
    pub fn belongs_to(&self, ambient: LieAmbient) -> bool {
        match self {
            LieProbe::Unit(i, j, _) => ambient != LieAmbient::SlInf || i != j,
            LieProbe::DiagDiff(k, w) => k != w,
        }
    }
}

pub type LieFn<R> = Arc<dyn Fn(&LieProbe<R>) -> Matrix<R> + Send + Sync>;

/// A derivation of a Lie ring of matrices, known by its values on
/// generator probes.
pub struct LieDerivation<R: Ring> {
    ring: R,
    ambient: LieAmbient,
    eval: LieFn<R>,
    provenance: Provenance<R>,
    concurrent: bool,
}

impl<R: Ring> Clone for LieDerivation<R> {
    fn clone(&self) -> Self {
        LieDerivation {
            ring: self.ring.clone(),
            ambient: self.ambient,
            eval: Arc::clone(&self.eval),
            provenance: self.provenance.clone(),
            concurrent: self.concurrent,
        }
    }
}

impl<R: Ring> fmt::Debug for LieDerivation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieDerivation")
            .field("ring", &self.ring.name())
            .field("ambient", &self.ambient)
            .field("provenance", &self.provenance.describe())
            .finish()
    }
}

impl<R: Ring> LieDerivation<R> {
    /// A user-supplied black box, probed serially by default.
    pub fn from_fn<F>(ring: &R, ambient: LieAmbient, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&LieProbe<R>) -> Matrix<R> + Send + Sync + 'static,
    {
        LieDerivation {
            ring: ring.clone(),
            ambient,
            eval: Arc::new(f),
            provenance: Provenance::BlackBox(label.into()),
            concurrent: false,
        }
    }

    /// `x ↦ [a, x]`. Outside `gl`, `a` must have rows.
    pub fn ad(ambient: LieAmbient, a: Matrix<R>) -> Result<Self, LieError> {
        if ambient != LieAmbient::Gl && !a.is_rcf() {
            let label = match &a {
                Matrix::Operator(op) => op.label().to_string(),
                Matrix::Finite(_) => unreachable!("finite matrices are rcf"),
            };
            return Err(LieError::NotRowFinite { ambient, label });
        }
        let ring = a.ring().clone();
        let (a2, r2) = (a.clone(), ring.clone());
        Ok(LieDerivation {
            ring,
            ambient,
            eval: Arc::new(move |p| a2.bracket(&Matrix::Finite(p.matrix(&r2))).expect("same ring")),
            provenance: Provenance::Inner(a),
            concurrent: true,
        })
    }

    /// Entrywise application of `u`.
    pub fn lift(ambient: LieAmbient, u: CoefficientDerivation<R>) -> Self {
        let ring = u.ring().clone();
        let name = u.name().to_string();
        let r2 = ring.clone();
        LieDerivation {
            ring,
            ambient,
            eval: Arc::new(move |p| {
                let m = p.matrix(&r2);
                Matrix::Finite(FiniteMatrix::from_entries(
                    &r2,
                    m.iter().map(|(i, j, r)| (i, j, u.apply(r))),
                ))
            }),
            provenance: Provenance::Lift(name),
            concurrent: true,
        }
    }

    /// The restriction of an associative derivation: every associative
    /// derivation is a Lie derivation of the same ring.
    pub fn from_associative(ambient: LieAmbient, d: &MatrixDerivation<R>) -> Self {
        let d2 = d.clone();
        let ring = d.ring().clone();
        let r2 = ring.clone();
        LieDerivation {
            ring,
            ambient,
            eval: Arc::new(move |p| d2.evaluate(&p.matrix(&r2)).expect("same ring")),
            provenance: d.provenance().clone(),
            concurrent: d.is_concurrent(),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LieError> {
        if self.ring != other.ring || self.ambient != other.ambient {
            return Err(LieError::Mismatch(format!(
                "{} on {} vs {} on {}",
                self.ring.name(),
                self.ambient,
                other.ring.name(),
                other.ambient
            )));
        }
        let (f, g) = (Arc::clone(&self.eval), Arc::clone(&other.eval));
        let mut parts = Vec::new();
        for p in [&self.provenance, &other.provenance] {
            match p {
                Provenance::Sum(inner) => parts.extend(inner.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        Ok(LieDerivation {
            ring: self.ring.clone(),
            ambient: self.ambient,
            eval: Arc::new(move |p| f(p).add(&g(p)).expect("same ring")),
            provenance: Provenance::Sum(parts),
            concurrent: self.concurrent && other.concurrent,
        })
    }

    pub(crate) fn minus_inner(&self, a: &Matrix<R>) -> Self {
        let f = Arc::clone(&self.eval);
        let (a, ring) = (a.clone(), self.ring.clone());
        LieDerivation {
            ring: self.ring.clone(),
            ambient: self.ambient,
            eval: Arc::new(move |p| {
                f(p).sub(&a.bracket(&Matrix::Finite(p.matrix(&ring))).expect("same ring"))
                    .expect("same ring")
            }),
            provenance: Provenance::BlackBox(format!("{} - ad(v)", self.provenance.describe())),
            concurrent: self.concurrent,
        }
    }

    pub fn with_concurrency(mut self, concurrent: bool) -> Self {
        self.concurrent = concurrent;
        self
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ambient(&self) -> LieAmbient {
        self.ambient
    }

    pub fn provenance(&self) -> &Provenance<R> {
        &self.provenance
    }

    pub fn is_concurrent(&self) -> bool {
        self.concurrent
    }

    /// `D(p)`. Unguarded.
    pub fn eval(&self, p: &LieProbe<R>) -> Matrix<R> {
        (self.eval)(p)
    }

    /// `D(x)` for an element expressible in the probes; see [`expand`].
    pub fn evaluate(&self, x: &FiniteMatrix<R>) -> Result<Matrix<R>, LieError> {
        let terms = expand(&self.ring, self.ambient, x).ok_or_else(|| {
            LieError::Unsupported(format!("not an integer combination of {} probes", self.ambient))
        })?;
        Ok(terms.iter().fold(Matrix::zero(&self.ring), |acc, (p, m)| {
            acc.add(&scale_int(&self.eval(p), *m)).expect("same ring")
        }))
    }
}

/// `k·M` by repeated addition.
pub(crate) fn scale_int<R: Ring>(m: &Matrix<R>, k: i64) -> Matrix<R> {
    match m {
        Matrix::Finite(f) => Matrix::Finite(f.scale_left(&f.ring().from_int(k))),
        Matrix::Operator(_) => {
            let sum = (0..k.unsigned_abs()).fold(Matrix::zero(m.ring()), |acc, _| {
                acc.add(m).expect("same ring")
            });
            if k < 0 {
                sum.neg()
            } else {
                sum
            }
        }
    }
}

/// Writes `x` as an integer combination of probes. In `gl` ambients every
/// entry is a unit probe. In `sl_inf` the diagonal entries must be small
/// integer multiples of `1` with zero trace; they become diagonal
/// differences against the first diagonal index.
pub fn expand<R: Ring>(ring: &R, ambient: LieAmbient, x: &FiniteMatrix<R>) -> Option<Vec<(LieProbe<R>, i64)>> {
    let mut out = Vec::new();
    let mut diagonal = Vec::new();
    for (i, j, r) in x.iter() {
        if i != j || ambient != LieAmbient::SlInf {
            out.push((LieProbe::Unit(i, j, r.clone()), 1));
        } else {
            let m = (-8..=8).find(|&m| ring.equal(&ring.from_int(m), r))?;
            diagonal.push((i, m));
        }
    }
    if let Some(&(base, _)) = diagonal.first() {
        let total: i64 = diagonal.iter().map(|(_, m)| m).sum();
        if !ring.is_zero(&ring.from_int(total)) {
            return None;
        }
        out.extend(
            diagonal
                .iter()
                .filter(|(k, _)| *k != base)
                .map(|&(k, m)| (LieProbe::DiagDiff(k, base), m)),
        );
    }
    Some(out)
}

/// Decides membership in `sl_∞` through the trace: `X ∈ sl_∞` iff
/// `trace(X)` lies in the additive span of the commutators of `R`.
#[derive(Debug, Clone)]
pub struct SlMembershipOracle<R: Ring> {
    ring: R,
}

impl<R: Ring> SlMembershipOracle<R> {
    pub fn new(ring: &R) -> Result<Self, LieError> {
        match ring.in_commutator_span(&ring.zero()) {
            Some(_) => Ok(SlMembershipOracle { ring: ring.clone() }),
            None => Err(LieError::Unsupported(format!(
                "{} has no commutator-span oracle",
                ring.name()
            ))),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
}

pub fn sl_member<R: Ring>(x: &FiniteMatrix<R>, oracle: &SlMembershipOracle<R>) -> Result<bool, LieError> {
    if x.ring() != &oracle.ring {
        return Err(LieError::Mismatch(format!(
            "{} matrix, {} oracle",
            x.ring().name(),
            oracle.ring.name()
        )));
    }
    oracle
        .ring
        .in_commutator_span(&x.trace())
        .ok_or_else(|| LieError::Unsupported("commutator-span oracle unavailable".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Operator;
    use crate::ring::{Integers, IntegersMod, Mat2};
    use num_bigint::BigInt;

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn membership_examples() {
        let oz = SlMembershipOracle::new(&Integers).unwrap();
        assert!(sl_member(&FiniteMatrix::unit(&Integers, 0, 1, z(1)), &oz).unwrap());
        assert!(!sl_member(&FiniteMatrix::unit(&Integers, 0, 0, z(1)), &oz).unwrap());
        let m = Mat2::new(3).unwrap();
        let om = SlMembershipOracle::new(&m).unwrap();
        assert!(sl_member(&FiniteMatrix::unit(&m, 0, 0, [1, 0, 0, 2]), &om).unwrap());
        assert!(!sl_member(&FiniteMatrix::unit(&m, 0, 0, [1, 0, 0, 0]), &om).unwrap());
        let z6 = IntegersMod::new(6).unwrap();
        assert!(sl_member(&FiniteMatrix::unit(&z6, 0, 0, 1), &SlMembershipOracle::new(&z6).unwrap()).is_ok());
        let m5 = SlMembershipOracle::new(&Mat2::new(5).unwrap()).unwrap();
        assert!(matches!(
            sl_member(&FiniteMatrix::unit(&m, 0, 0, [1, 0, 0, 2]), &m5),
            Err(LieError::Mismatch(_))
        ));
    }

    #[test]
    fn expansion_of_trace_zero_diagonals() {
        let x = FiniteMatrix::from_entries(&Integers, [(0, 0, z(2)), (3, 3, z(-2)), (1, 2, z(7))]);
        let terms = expand(&Integers, LieAmbient::SlInf, &x).unwrap();
        assert!(terms.contains(&(LieProbe::Unit(1, 2, z(7)), 1)));
        assert!(terms.contains(&(LieProbe::DiagDiff(3, 0), -2)));
        assert!(expand(&Integers, LieAmbient::SlInf, &FiniteMatrix::unit(&Integers, 0, 0, z(1))).is_none());
        let z3 = IntegersMod::new(3).unwrap();
        let scalar3 = FiniteMatrix::from_entries(&z3, [(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
        assert_eq!(expand(&z3, LieAmbient::SlInf, &scalar3).unwrap().len(), 2);
    }

    #[test]
    fn ad_and_lift_agree_with_evaluate() {
        let s = LieDerivation::ad(LieAmbient::SlInf, Operator::shift(&Integers).into()).unwrap();
        let x = FiniteMatrix::from_entries(&Integers, [(0, 0, z(1)), (2, 2, z(-1)), (0, 2, z(3))]);
        let direct = Matrix::Operator(Operator::shift(&Integers))
            .bracket(&Matrix::Finite(x.clone()))
            .unwrap();
        assert_eq!(s.evaluate(&x).unwrap().as_finite(), direct.as_finite());
        assert!(LieDerivation::ad(LieAmbient::SlInf, Operator::ones_row(&Integers, 0).into()).is_err());
        assert!(LieDerivation::ad(LieAmbient::Gl, Operator::ones_row(&Integers, 0).into()).is_ok());
    }
}
