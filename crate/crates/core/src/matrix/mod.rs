//! The three matrix rings `M_∞(I,R) ⊂ M_rcf(I,R) ⊂ M(I,R)` over the
//! index set `I = ℕ`.
//!
//! Finite matrices are stored explicitly. Infinite ones are
//! [`Operator`]s: memoized column (and optionally row) accessors. Equality
//! of operators is only decidable on a [`Window`], so every comparison
//! involving an operator is window-scoped.
//!
//! Multiplication follows the closure table
//!
//! | left \ right | finite | rcf    | column |
//! |--------------|--------|--------|--------|
//! | finite       | finite | finite | column |
//! | rcf          | finite | rcf    | column |
//! | column       | finite | column | column |
//!
//! `finite · column` is only column-finite: `e_00(1)` times the all-ones
//! row 0 is that row again.

mod finite;
mod json;
mod operator;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::mutation::{self, Mutation};
use crate::ring::Ring;

pub use finite::FiniteMatrix;
pub use json::{parse_triples, triples_json, window_report_json};
pub use operator::{Line, Operator};
pub(crate) use operator::Accessor;

/// Indices range over the natural numbers.
pub type Index = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrices over different rings: {left} and {right}")]
    MixedRings { left: String, right: String },
    #[error("window bound must be at least 1")]
    EmptyWindow,
    #[error("malformed matrix text: {0}")]
    Malformed(String),
}

/// The square `{0..n-1} × {0..n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    bound: Index,
}

impl Window {
    pub fn new(bound: Index) -> Result<Self, MatrixError> {
        if bound == 0 {
            Err(MatrixError::EmptyWindow)
        } else {
            Ok(Window { bound })
        }
    }

    pub fn bound(&self) -> Index {
        self.bound
    }

    pub fn contains(&self, i: Index, j: Index) -> bool {
        i < self.bound && j < self.bound
    }

    pub fn indices(&self) -> std::ops::Range<Index> {
        0..self.bound
    }

    /// All `(i, j)` in the window, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (Index, Index)> {
        let n = self.bound;
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatrixClass {
    Finite,
    RowColumnFinite,
    ColumnFinite,
}

/// An element of one of the three rings.
#[derive(Clone, Debug)]
pub enum Matrix<R: Ring> {
    Finite(FiniteMatrix<R>),
    Operator(Operator<R>),
}

impl<R: Ring> From<FiniteMatrix<R>> for Matrix<R> {
    fn from(m: FiniteMatrix<R>) -> Self {
        Matrix::Finite(m)
    }
}

impl<R: Ring> From<Operator<R>> for Matrix<R> {
    fn from(op: Operator<R>) -> Self {
        Matrix::Operator(op)
    }
}

fn merge_lines<R: Ring>(ring: &R, parts: impl IntoIterator<Item = (Index, R::Elem)>) -> Vec<(Index, R::Elem)> {
    let mut acc: BTreeMap<Index, R::Elem> = BTreeMap::new();
    for (i, r) in parts {
        let next = match acc.remove(&i) {
            Some(prev) => ring.add(&prev, &r),
            None => r,
        };
        acc.insert(i, next);
    }
    acc.into_iter().filter(|(_, r)| !ring.is_zero(r)).collect()
}

impl<R: Ring> Matrix<R> {
    pub fn ring(&self) -> &R {
        match self {
            Matrix::Finite(m) => m.ring(),
            Matrix::Operator(op) => op.ring(),
        }
    }

    pub fn class(&self) -> MatrixClass {
        match self {
            Matrix::Finite(_) => MatrixClass::Finite,
            Matrix::Operator(op) if op.is_rcf() => MatrixClass::RowColumnFinite,
            Matrix::Operator(_) => MatrixClass::ColumnFinite,
        }
    }

    /// Row accessors are available (finite or rcf).
    pub fn is_rcf(&self) -> bool {
        self.class() != MatrixClass::ColumnFinite
    }

    pub fn as_finite(&self) -> Option<&FiniteMatrix<R>> {
        match self {
            Matrix::Finite(m) => Some(m),
            Matrix::Operator(_) => None,
        }
    }

    pub fn zero(ring: &R) -> Self {
        Matrix::Finite(FiniteMatrix::zero(ring))
    }

    pub fn entry(&self, i: Index, j: Index) -> R::Elem {
        match self {
            Matrix::Finite(m) => m.entry(i, j),
            Matrix::Operator(op) => op.entry(i, j),
        }
    }

    pub fn col(&self, j: Index) -> Line<R::Elem> {
        match self {
            Matrix::Finite(m) => Arc::new(m.col_entries(j)),
            Matrix::Operator(op) => op.col(j),
        }
    }

    pub fn row(&self, i: Index) -> Option<Line<R::Elem>> {
        match self {
            Matrix::Finite(m) => Some(Arc::new(m.row_entries(i))),
            Matrix::Operator(op) => op.row(i),
        }
    }

    fn as_operator(&self) -> Operator<R> {
        match self {
            Matrix::Finite(m) => Operator::from_finite(m),
            Matrix::Operator(op) => op.clone(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), MatrixError> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(MatrixError::MixedRings {
                left: self.ring().name(),
                right: other.ring().name(),
            })
        }
    }

    /// Exact entries on the window; one column access per window column.
    pub fn window_of(&self, w: Window) -> FiniteMatrix<R> {
        match self {
            Matrix::Finite(m) => m.restrict(w),
            Matrix::Operator(op) => FiniteMatrix::from_entries(
                op.ring(),
                w.indices().flat_map(|j| {
                    op.col(j)
                        .iter()
                        .take_while(|(i, _)| *i < w.bound())
                        .map(|(i, r)| (*i, j, r.clone()))
                        .collect::<Vec<_>>()
                }),
            ),
        }
    }

    /// Exact for two finite matrices, window-scoped otherwise.
    pub fn agrees_with(&self, other: &Self, w: Window) -> bool {
        match (self, other) {
            (Matrix::Finite(a), Matrix::Finite(b)) => a == b,
            _ => self.window_of(w) == other.window_of(w),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Matrix::Finite(m) => Matrix::Finite(m.neg()),
            Matrix::Operator(op) => {
                let (a, ring) = (op.clone(), op.ring().clone());
                let ring2 = ring.clone();
                let col = Arc::new(move |j| a.col(j).iter().map(|(i, r)| (*i, ring.neg(r))).collect());
                let b = op.clone();
                let row = op.is_rcf().then(|| {
                    Arc::new(move |i| {
                        b.row(i)
                            .expect("rcf")
                            .iter()
                            .map(|(j, r)| (*j, ring2.neg(r)))
                            .collect()
                    }) as operator::Accessor<R::Elem>
                });
                Matrix::Operator(Operator::derived(op.ring(), format!("-{}", op.label()), col, row))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_ring(other)?;
        if let (Matrix::Finite(a), Matrix::Finite(b)) = (self, other) {
            return Ok(Matrix::Finite(a.add(b)?));
        }
        let (a, b) = (self.as_operator(), other.as_operator());
        let ring = self.ring().clone();
        let label = format!("({} + {})", a.label(), b.label());
        let (ca, cb, cr) = (a.clone(), b.clone(), ring.clone());
        let col = Arc::new(move |j| {
            merge_lines(&cr, ca.col(j).iter().chain(cb.col(j).iter()).cloned())
        });
        let row = (a.is_rcf() && b.is_rcf()).then(|| {
            let (ra, rb) = (a.clone(), b.clone());
            Arc::new(move |i| {
                let (x, y) = (ra.row(i).expect("rcf"), rb.row(i).expect("rcf"));
                merge_lines(&ring, x.iter().chain(y.iter()).cloned())
            }) as operator::Accessor<R::Elem>
        });
        Ok(Matrix::Operator(Operator::derived(self.ring(), label, col, row)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.add(&other.neg())
    }

    /// Exact product; the result class follows the closure table.
    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_ring(other)?;
        let ring = self.ring().clone();
        match (self, other) {
            (Matrix::Finite(a), Matrix::Finite(b)) => Ok(Matrix::Finite(a.mul(b)?)),
            // column-finite times finite: only the columns of the left factor
            // at the rows of the right support are read
            (Matrix::Operator(a), Matrix::Finite(x)) => Ok(Matrix::Finite(FiniteMatrix::from_entries(
                &ring,
                x.iter().flat_map(|(k, j, xv)| {
                    a.col(k)
                        .iter()
                        .map(|(i, av)| (*i, j, ring.mul(av, xv)))
                        .collect::<Vec<_>>()
                }),
            ))),
            (Matrix::Finite(x), Matrix::Operator(a)) if a.is_rcf() => {
                Ok(Matrix::Finite(FiniteMatrix::from_entries(
                    &ring,
                    x.iter().flat_map(|(i, k, xv)| {
                        a.row(k)
                            .expect("rcf")
                            .iter()
                            .map(|(j, av)| (i, *j, ring.mul(xv, av)))
                            .collect::<Vec<_>>()
                    }),
                )))
            }
            (Matrix::Finite(x), Matrix::Operator(a)) => {
                let (x, a, r) = (x.clone(), a.clone(), ring.clone());
                let label = format!("finite*{}", a.label());
                let col = Arc::new(move |j| {
                    let column = a.col(j);
                    merge_lines(
                        &r,
                        x.iter()
                            .filter_map(|(i, k, xv)| {
                                column
                                    .binary_search_by_key(&k, |e| e.0)
                                    .ok()
                                    .map(|p| (i, r.mul(xv, &column[p].1)))
                            })
                            .collect::<Vec<_>>(),
                    )
                });
                Ok(Matrix::Operator(Operator::derived(&ring, label, col, None)))
            }
            (Matrix::Operator(a), Matrix::Operator(b)) => {
                let label = format!("{}*{}", a.label(), b.label());
                let (ca, cb, cr) = (a.clone(), b.clone(), ring.clone());
                let col = Arc::new(move |j| {
                    let mut parts = Vec::new();
                    for (k, bv) in cb.col(j).iter() {
                        for (i, av) in ca.col(*k).iter() {
                            parts.push((*i, cr.mul(av, bv)));
                        }
                    }
                    merge_lines(&cr, parts)
                });
                let row = (a.is_rcf() && b.is_rcf()).then(|| {
                    let (ra, rb, rr) = (a.clone(), b.clone(), ring.clone());
                    Arc::new(move |i| {
                        let mut parts = Vec::new();
                        for (k, av) in ra.row(i).expect("rcf").iter() {
                            for (j, bv) in rb.row(*k).expect("rcf").iter() {
                                parts.push((*j, rr.mul(av, bv)));
                            }
                        }
                        merge_lines(&rr, parts)
                    }) as operator::Accessor<R::Elem>
                });
                Ok(Matrix::Operator(Operator::derived(&ring, label, col, row)))
            }
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &Self) -> Result<Self, MatrixError> {
        let (ab, ba) = (self.mul(other)?, other.mul(self)?);
        if mutation::active(Mutation::BracketSign) {
            return ba.sub(&ab);
        }
        ab.sub(&ba)
    }

    /// Same as [`FiniteMatrix::lemma1_shape`] for finite matrices; for
    /// operators the entrywise criterion restricted to the window.
    pub fn lemma1_shape_on(&self, k: Index, w: Window) -> bool {
        match self {
            Matrix::Finite(m) => m.lemma1_shape(k),
            Matrix::Operator(_) => self.window_of(w).lemma1_entrywise(k),
        }
    }
}

/// `diag(f)` as a matrix.
pub fn diag<R, F>(ring: &R, f: F) -> Matrix<R>
where
    R: Ring,
    F: Fn(Index) -> R::Elem + Send + Sync + 'static,
{
    Matrix::Operator(Operator::diag(ring, "diag", f))
}

/// Row/column agreement and canonical lists on the window. Operators
/// without a row accessor are never consistent.
pub fn is_rcf_consistent_on_window<R: Ring>(op: &Operator<R>, w: Window) -> bool {
    if !op.is_rcf() {
        return false;
    }
    let ring = op.ring();
    let mut from_rows = FiniteMatrix::zero(ring);
    for i in w.indices() {
        for (j, r) in op.row(i).expect("rcf").iter() {
            if *j < w.bound() {
                from_rows.accumulate(i, *j, r.clone());
            }
        }
    }
    let from_cols = Matrix::Operator(op.clone()).window_of(w);
    op.defect().is_none() && from_rows == from_cols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, IntegersMod, Mat2};
    use num_bigint::BigInt;

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    fn unit(i: Index, j: Index, k: i64) -> Matrix<Integers> {
        FiniteMatrix::unit(&Integers, i, j, z(k)).into()
    }

    fn shift() -> Matrix<Integers> {
        Operator::shift(&Integers).into()
    }

    #[test]
    fn shift_plus_unit() {
        let m = shift().add(&unit(0, 0, 1)).unwrap();
        assert_eq!(*m.col(0), vec![(0, z(1)), (1, z(1))]);
        assert_eq!(m.class(), MatrixClass::RowColumnFinite);
    }

    #[test]
    fn shift_times_unit() {
        let p = shift().mul(&unit(0, 0, 1)).unwrap();
        assert_eq!(p.as_finite().unwrap(), &FiniteMatrix::unit(&Integers, 1, 0, z(1)));
    }

    #[test]
    fn brackets() {
        assert!(unit(0, 0, 1)
            .bracket(&unit(0, 0, 1))
            .unwrap()
            .as_finite()
            .unwrap()
            .is_zero());
        // row 0 of the shift is empty, so e_00·S = 0
        let b = shift().bracket(&unit(0, 0, 1)).unwrap();
        assert_eq!(b.as_finite().unwrap(), &FiniteMatrix::unit(&Integers, 1, 0, z(1)));
        let b = shift().bracket(&unit(2, 2, 1)).unwrap();
        let expected = FiniteMatrix::from_entries(&Integers, [(3, 2, z(1)), (2, 1, z(-1))]);
        assert_eq!(b.as_finite().unwrap(), &expected);
        let scalar = Matrix::Operator(Operator::diag(&Integers, "3", |_| z(3)));
        let x: Matrix<Integers> =
            FiniteMatrix::from_entries(&Integers, [(0, 2, z(1)), (4, 1, z(-7)), (3, 3, z(2))]).into();
        assert!(scalar.bracket(&x).unwrap().as_finite().unwrap().is_zero());
    }

    #[test]
    fn closure_table_classes() {
        use MatrixClass::*;
        let fin = unit(0, 1, 2);
        let rcf = shift();
        let col: Matrix<Integers> = Operator::ones_row(&Integers, 0).into();
        let table = [
            (&fin, &fin, Finite),
            (&col, &fin, Finite),
            (&fin, &rcf, Finite),
            (&rcf, &fin, Finite),
            (&col, &col, ColumnFinite),
            (&rcf, &rcf, RowColumnFinite),
            (&rcf, &col, ColumnFinite),
            (&col, &rcf, ColumnFinite),
            (&fin, &col, ColumnFinite),
        ];
        for (a, b, class) in table {
            assert_eq!(a.mul(b).unwrap().class(), class, "{:?} * {:?}", a.class(), b.class());
        }
    }

    #[test]
    fn finite_times_ones_row_is_not_finite() {
        let r0: Matrix<Integers> = Operator::ones_row(&Integers, 0).into();
        let p = unit(0, 0, 1).mul(&r0).unwrap();
        assert_eq!(p.class(), MatrixClass::ColumnFinite);
        let w = Window::new(50).unwrap();
        assert_eq!(p.window_of(w), r0.window_of(w));
    }

    #[test]
    fn window_examples() {
        let w = Window::new(3).unwrap();
        let id: Matrix<Integers> = Operator::identity(&Integers).into();
        assert_eq!(
            id.window_of(w),
            FiniteMatrix::from_entries(&Integers, [(0, 0, z(1)), (1, 1, z(1)), (2, 2, z(1))])
        );
        assert_eq!(
            shift().window_of(w),
            FiniteMatrix::from_entries(&Integers, [(1, 0, z(1)), (2, 1, z(1))])
        );
        let zero = Matrix::Operator(Operator::column_finite(&Integers, "zero", |_| Vec::new()));
        assert!(zero.window_of(Window::new(9).unwrap()).is_zero());
        assert!(Window::new(0).is_err());
    }

    #[test]
    fn operator_constructors_from_accessors() {
        let s = Operator::from_accessors(
            &Integers,
            "user shift",
            |j| vec![(j + 1, z(1))],
            Some(|i: Index| if i == 0 { vec![] } else { vec![(i - 1, z(1))] }),
        );
        for n in 1..12 {
            assert!(is_rcf_consistent_on_window(&s, Window::new(n).unwrap()));
        }
        let r0 = Operator::column_finite(&Integers, "r0", |_| vec![(0, z(1))]);
        assert!(!r0.is_rcf());
        assert!(!is_rcf_consistent_on_window(&r0, Window::new(3).unwrap()));
    }

    #[test]
    fn planted_inconsistency_detected() {
        let bad = Operator::from_accessors(
            &Integers,
            "bad",
            |_| Vec::new(),
            Some(|i: Index| if i == 0 { vec![(0, z(1))] } else { vec![] }),
        );
        assert!(!is_rcf_consistent_on_window(&bad, Window::new(2).unwrap()));
        let diag = Operator::diag(&Integers, "d", |i| z(i as i64 + 1));
        assert!(is_rcf_consistent_on_window(&diag, Window::new(7).unwrap()));
    }

    #[test]
    fn window_reads_each_column_once() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let calls = Arc::new(AtomicUsize::new(0));
        let c = Arc::clone(&calls);
        let op = Operator::column_finite(&Integers, "counted", move |j| {
            c.fetch_add(1, Ordering::SeqCst);
            vec![(j / 2, z(1))]
        });
        let m = Matrix::Operator(op);
        m.window_of(Window::new(6).unwrap());
        m.window_of(Window::new(6).unwrap());
        assert_eq!(calls.load(Ordering::SeqCst), 6);
    }

    #[test]
    fn mixed_ring_product_rejected() {
        let a: Matrix<IntegersMod> = FiniteMatrix::unit(&IntegersMod::new(4).unwrap(), 0, 0, 1).into();
        let b: Matrix<IntegersMod> = Operator::shift(&IntegersMod::new(6).unwrap()).into();
        assert!(a.mul(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn noncommutative_products_keep_order() {
        let m = Mat2::new(3).unwrap();
        let (p, q) = ([0, 1, 0, 0], [0, 0, 1, 0]);
        let a: Matrix<Mat2> = FiniteMatrix::unit(&m, 0, 1, p).into();
        let b: Matrix<Mat2> = FiniteMatrix::unit(&m, 1, 0, q).into();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.entry(0, 0), [1, 0, 0, 0]);
        let ba = b.mul(&a).unwrap();
        assert_eq!(ba.entry(1, 1), [0, 0, 0, 1]);
    }
}
