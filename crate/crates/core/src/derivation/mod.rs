//! Black-box derivations of the matrix rings and their decomposition into
//! an inner part plus a coefficient lift, `d = ad(a) + u`.
//!
//! A derivation is only ever observed through its values on matrix units
//! `e_ij(r)`. Everything the engine concludes is therefore scoped to a
//! [`Window`]: "decomposed on window n" means every probe inside the
//! window agreed exactly, never that a global identity was proven.

mod decompose;
mod probe;
mod report;
mod validate;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{FiniteMatrix, Index, Matrix, MatrixError, Window};
use crate::ring::{CoefficientDerivation, Ring};

pub use decompose::{
    cocycle_correct, coefficient_map, decompose, decompose_with, extract_v, lemma3_row_probe,
    probe_backed_v, DecomposeConfig, RowProbe,
};
pub(crate) use decompose::{coefficient_tail, first_failure, off_diagonal, ProbeFn, TailResult};
pub use probe::{Halt, Prober};
pub use report::{CheckOutcome, DecompositionReport, Outcome, Status};
pub use validate::validate_derivation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("derivations act on different rings or ambients: {0}")]
    Mismatch(String),
    #[error("ad(a) on {ambient} needs a row-and-column-finite a; {label} is only column-finite")]
    NotRowFinite { ambient: Ambient, label: String },
}

/// The ring a derivation differentiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// `M_∞(I, R)`, finitely supported matrices.
    Inf,
    /// `M_rcf(I, R)`, row- and column-finite matrices.
    Rcf,
    /// `M(I, R)`, column-finite matrices.
    Full,
}

impl Ambient {
    pub fn name(&self) -> &'static str {
        match self {
            Ambient::Inf => "M_inf",
            Ambient::Rcf => "M_rcf",
            Ambient::Full => "M_full",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "M_inf" => Some(Ambient::Inf),
            "M_rcf" => Some(Ambient::Rcf),
            "M_full" => Some(Ambient::Full),
            _ => None,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a derivation was built, when it was built rather than supplied.
#[derive(Clone, Debug)]
pub enum Provenance<R: Ring> {
    Inner(Matrix<R>),
    Lift(String),
    Sum(Vec<Provenance<R>>),
    BlackBox(String),
}

impl<R: Ring> Provenance<R> {
    pub fn describe(&self) -> String {
        match self {
            Provenance::Inner(a) => match a {
                Matrix::Finite(_) => "ad(finite)".to_string(),
                Matrix::Operator(op) => format!("ad({})", op.label()),
            },
            Provenance::Lift(name) => format!("lift({name})"),
            Provenance::Sum(parts) => parts
                .iter()
                .map(Provenance::describe)
                .collect::<Vec<_>>()
                .join(" + "),
            Provenance::BlackBox(label) => format!("black box {label}"),
        }
    }

    /// The sum of all inner parts, when every part is structural.
    pub fn inner_part(&self, ring: &R) -> Option<Matrix<R>> {
        match self {
            Provenance::Inner(a) => Some(a.clone()),
            Provenance::Lift(_) => Some(Matrix::zero(ring)),
            Provenance::Sum(parts) => parts.iter().try_fold(Matrix::zero(ring), |acc, p| {
                acc.add(&p.inner_part(ring)?).ok()
            }),
            Provenance::BlackBox(_) => None,
        }
    }
}

pub type UnitFn<R> = Arc<dyn Fn(Index, Index, &<R as Ring>::Elem) -> Matrix<R> + Send + Sync>;

/// A derivation presented by its values `d(e_ij(r))` on matrix units.
pub struct MatrixDerivation<R: Ring> {
    ring: R,
    ambient: Ambient,
    eval: UnitFn<R>,
    provenance: Provenance<R>,
    concurrent: bool,
}

impl<R: Ring> Clone for MatrixDerivation<R> {
    fn clone(&self) -> Self {
        MatrixDerivation {
            ring: self.ring.clone(),
            ambient: self.ambient,
            eval: Arc::clone(&self.eval),
            provenance: self.provenance.clone(),
            concurrent: self.concurrent,
        }
    }
}

impl<R: Ring> fmt::Debug for MatrixDerivation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixDerivation")
            .field("ring", &self.ring.name())
            .field("ambient", &self.ambient)
            .field("provenance", &self.provenance.describe())
            .finish()
    }
}

impl<R: Ring> MatrixDerivation<R> {
    /// A user-supplied black box. Probes are serialized unless
    /// [`with_concurrency`](Self::with_concurrency) opts in.
    pub fn from_fn<F>(ring: &R, ambient: Ambient, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Index, Index, &R::Elem) -> Matrix<R> + Send + Sync + 'static,
    {
        MatrixDerivation {
            ring: ring.clone(),
            ambient,
            eval: Arc::new(f),
            provenance: Provenance::BlackBox(label.into()),
            concurrent: false,
        }
    }

    /// The inner derivation `x ↦ ax - xa`.
    pub fn inner(ambient: Ambient, a: Matrix<R>) -> Result<Self, DerivationError> {
        if ambient != Ambient::Full && !a.is_rcf() {
            let label = match &a {
                Matrix::Operator(op) => op.label().to_string(),
                Matrix::Finite(_) => unreachable!("finite matrices are rcf"),
            };
            return Err(DerivationError::NotRowFinite { ambient, label });
        }
        let ring = a.ring().clone();
        let a2 = a.clone();
        let r2 = ring.clone();
        Ok(MatrixDerivation {
            ring,
            ambient,
            eval: Arc::new(move |i, j, r| {
                let unit = Matrix::Finite(FiniteMatrix::unit(&r2, i, j, r.clone()));
                a2.bracket(&unit).expect("same ring")
            }),
            provenance: Provenance::Inner(a),
            concurrent: true,
        })
    }

    /// Entrywise application of a coefficient derivation.
    pub fn lift(ambient: Ambient, u: CoefficientDerivation<R>) -> Self {
        let ring = u.ring().clone();
        let name = u.name().to_string();
        let r2 = ring.clone();
        MatrixDerivation {
            ring,
            ambient,
            eval: Arc::new(move |i, j, r| Matrix::Finite(FiniteMatrix::unit(&r2, i, j, u.apply(r)))),
            provenance: Provenance::Lift(name),
            concurrent: true,
        }
    }

    /// Pointwise sum.
    pub fn sum(&self, other: &Self) -> Result<Self, DerivationError> {
        if self.ring != other.ring || self.ambient != other.ambient {
            return Err(DerivationError::Mismatch(format!(
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
        Ok(MatrixDerivation {
            ring: self.ring.clone(),
            ambient: self.ambient,
            eval: Arc::new(move |i, j, r| f(i, j, r).add(&g(i, j, r)).expect("same ring")),
            provenance: Provenance::Sum(parts),
            concurrent: self.concurrent && other.concurrent,
        })
    }

    /// `self - ad(a)`, used to strip the extracted inner part.
    pub(crate) fn minus_inner(&self, a: &Matrix<R>) -> Self {
        let f = Arc::clone(&self.eval);
        let (a, ring) = (a.clone(), self.ring.clone());
        MatrixDerivation {
            ring: self.ring.clone(),
            ambient: self.ambient,
            eval: Arc::new(move |i, j, r| {
                let unit = Matrix::Finite(FiniteMatrix::unit(&ring, i, j, r.clone()));
                f(i, j, r)
                    .sub(&a.bracket(&unit).expect("same ring"))
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

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn provenance(&self) -> &Provenance<R> {
        &self.provenance
    }

    pub fn is_concurrent(&self) -> bool {
        self.concurrent
    }

    /// `d(e_ij(r))`. Unguarded: a panicking black box panics here.
    pub fn eval_unit(&self, i: Index, j: Index, r: &R::Elem) -> Matrix<R> {
        (self.eval)(i, j, r)
    }

    /// `d(X)` by additivity over the support of `X`.
    pub fn evaluate(&self, x: &FiniteMatrix<R>) -> Result<Matrix<R>, DerivationError> {
        if x.ring() != &self.ring {
            return Err(MatrixError::MixedRings {
                left: self.ring.name(),
                right: x.ring().name(),
            }
            .into());
        }
        x.iter().try_fold(Matrix::zero(&self.ring), |acc, (i, j, r)| {
            Ok(acc.add(&self.eval_unit(i, j, r))?)
        })
    }
}

pub(crate) fn unit<R: Ring>(ring: &R, i: Index, j: Index, r: R::Elem) -> Matrix<R> {
    Matrix::Finite(FiniteMatrix::unit(ring, i, j, r))
}

/// First position where `a` and `b` differ, as text. Exact when both are
/// finite, restricted to `w` otherwise.
pub(crate) fn difference<R: Ring>(a: &Matrix<R>, b: &Matrix<R>, w: Window) -> Option<String> {
    let ring = a.ring();
    let diff = a.sub(b).expect("same ring");
    let table = match &diff {
        Matrix::Finite(m) => m.clone(),
        Matrix::Operator(_) => diff.window_of(w),
    };
    let (i, j, _) = table.iter().next()?;
    Some(format!(
        "entry ({i},{j}): {} vs {}",
        ring.format(&a.entry(i, j)),
        ring.format(&b.entry(i, j))
    ))
}

/// Default probe budget for a window of bound `n`.
pub fn default_budget(n: Index, trials: usize) -> usize {
    32 * (n * n + 8 * n) * (trials + 2)
}

/// Largest support accepted from a single probe.
pub const DEFAULT_MAX_SUPPORT: usize = 1 << 16;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Operator;
    use crate::ring::{formal_derivative, inner_ring_derivation, Integers, Mat2, PolyZ};
    use num_bigint::BigInt;

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn inner_examples() {
        let a: Matrix<Integers> = FiniteMatrix::unit(&Integers, 0, 1, z(1)).into();
        let d = MatrixDerivation::inner(Ambient::Inf, a).unwrap();
        assert_eq!(
            d.eval_unit(1, 1, &z(1)).as_finite().unwrap(),
            &FiniteMatrix::unit(&Integers, 0, 1, z(1))
        );
        let id = MatrixDerivation::inner(Ambient::Rcf, Operator::identity(&Integers).into()).unwrap();
        assert!(id.eval_unit(3, 5, &z(9)).as_finite().unwrap().is_zero());
        let s = MatrixDerivation::inner(Ambient::Inf, Operator::shift(&Integers).into()).unwrap();
        assert_eq!(
            s.eval_unit(0, 0, &z(1)).as_finite().unwrap(),
            &FiniteMatrix::unit(&Integers, 1, 0, z(1))
        );
        assert_eq!(
            s.eval_unit(3, 3, &z(1)).as_finite().unwrap(),
            &FiniteMatrix::from_entries(&Integers, [(4, 3, z(1)), (3, 2, z(-1))])
        );
    }

    #[test]
    fn inner_rejects_column_finite_outside_full_ambient() {
        let r0: Matrix<Integers> = Operator::ones_row(&Integers, 0).into();
        assert!(matches!(
            MatrixDerivation::inner(Ambient::Inf, r0.clone()),
            Err(DerivationError::NotRowFinite { .. })
        ));
        assert!(MatrixDerivation::inner(Ambient::Rcf, r0.clone()).is_err());
        let d = MatrixDerivation::inner(Ambient::Full, r0).unwrap();
        // row 0 of e_00·r0 is infinite
        assert!(d.eval_unit(0, 0, &z(1)).as_finite().is_none());
    }

    #[test]
    fn lift_examples() {
        let d = MatrixDerivation::lift(Ambient::Inf, formal_derivative());
        let t2 = PolyZ.from_coeffs(&[0, 0, 1]);
        assert_eq!(
            d.eval_unit(2, 5, &t2).as_finite().unwrap(),
            &FiniteMatrix::unit(&PolyZ, 2, 5, PolyZ.from_coeffs(&[0, 2]))
        );
        let zero = MatrixDerivation::lift(Ambient::Inf, CoefficientDerivation::zero(&PolyZ));
        assert!(zero.eval_unit(0, 0, &t2).as_finite().unwrap().is_zero());
        let m = Mat2::new(3).unwrap();
        let r0 = [0, 1, 2, 0];
        let u = inner_ring_derivation(&m, &r0).unwrap();
        let x = [1, 1, 0, 2];
        let d = MatrixDerivation::lift(Ambient::Rcf, u);
        let expected = m.sub(&m.mul(&r0, &x), &m.mul(&x, &r0));
        assert_eq!(d.eval_unit(4, 1, &x).entry(4, 1), expected);
    }

    #[test]
    fn evaluate_and_sum() {
        let a: Matrix<Integers> = FiniteMatrix::unit(&Integers, 0, 1, z(1)).into();
        let d1 = MatrixDerivation::inner(Ambient::Inf, a).unwrap();
        let x = FiniteMatrix::unit(&Integers, 1, 1, z(1));
        assert_eq!(
            d1.evaluate(&x).unwrap().as_finite().unwrap(),
            &FiniteMatrix::unit(&Integers, 0, 1, z(1))
        );
        assert!(d1
            .evaluate(&FiniteMatrix::zero(&Integers))
            .unwrap()
            .as_finite()
            .unwrap()
            .is_zero());
        let d2 = MatrixDerivation::inner(Ambient::Inf, Operator::shift(&Integers).into()).unwrap();
        let both = d1.sum(&d2).unwrap();
        let y = FiniteMatrix::from_entries(&Integers, [(0, 2, z(3)), (2, 1, z(-1)), (1, 1, z(5))]);
        let lhs = both.evaluate(&y).unwrap();
        let rhs = d1.evaluate(&y).unwrap().add(&d2.evaluate(&y).unwrap()).unwrap();
        assert!(lhs.agrees_with(&rhs, Window::new(6).unwrap()));
        assert_eq!(both.provenance().describe(), "ad(finite) + ad(shift)");
    }

    #[test]
    fn sum_requires_matching_ambient() {
        let a = MatrixDerivation::lift(Ambient::Inf, formal_derivative());
        let b = MatrixDerivation::lift(Ambient::Full, formal_derivative());
        assert!(matches!(a.sum(&b), Err(DerivationError::Mismatch(_))));
    }
}
