use std::collections::BTreeMap;
use std::fmt;

use super::{Index, MatrixError, Window};
use crate::ring::Ring;

/// An element of `M_∞(I, R)`: finitely many nonzero entries, no stored
/// zeros, iteration in ascending `(row, col)` order.
#[derive(Clone)]
pub struct FiniteMatrix<R: Ring> {
    ring: R,
    entries: BTreeMap<(Index, Index), R::Elem>,
}

impl<R: Ring> PartialEq for FiniteMatrix<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((p, a), (q, b))| p == q && self.ring.equal(a, b))
    }
}

impl<R: Ring> fmt::Debug for FiniteMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.entries
                    .iter()
                    .map(|(k, v)| (k, self.ring.format(v))),
            )
            .finish()
    }
}

impl<R: Ring> FiniteMatrix<R> {
    pub fn zero(ring: &R) -> Self {
        FiniteMatrix {
            ring: ring.clone(),
            entries: BTreeMap::new(),
        }
    }

    /// The matrix unit `e_ij(r)`; empty when `r` is zero.
    pub fn unit(ring: &R, i: Index, j: Index, r: R::Elem) -> Self {
        let mut m = Self::zero(ring);
        m.accumulate(i, j, r);
        m
    }

    /// Builds a matrix from triples; repeated positions are summed.
    pub fn from_entries<I>(ring: &R, entries: I) -> Self
    where
        I: IntoIterator<Item = (Index, Index, R::Elem)>,
    {
        let mut m = Self::zero(ring);
        for (i, j, r) in entries {
            m.accumulate(i, j, r);
        }
        m
    }

    pub(crate) fn accumulate(&mut self, i: Index, j: Index, r: R::Elem) {
        if self.ring.is_zero(&r) {
            return;
        }
        match self.entries.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), &r);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn get(&self, i: Index, j: Index) -> Option<&R::Elem> {
        self.entries.get(&(i, j))
    }

    pub fn entry(&self, i: Index, j: Index) -> R::Elem {
        self.get(i, j).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Index, Index, &R::Elem)> + '_ {
        self.entries.iter().map(|(&(i, j), r)| (i, j, r))
    }

    pub fn support(&self) -> Vec<(Index, Index)> {
        self.entries.keys().copied().collect()
    }

    /// Rows containing a nonzero entry, ascending.
    pub fn rows(&self) -> Vec<Index> {
        let mut rows: Vec<Index> = self.entries.keys().map(|&(i, _)| i).collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    /// Columns containing a nonzero entry, ascending.
    pub fn cols(&self) -> Vec<Index> {
        let mut cols: Vec<Index> = self.entries.keys().map(|&(_, j)| j).collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }

    pub fn row_entries(&self, i: Index) -> Vec<(Index, R::Elem)> {
        self.entries
            .range((i, 0)..=(i, Index::MAX))
            .map(|(&(_, j), r)| (j, r.clone()))
            .collect()
    }

    pub fn col_entries(&self, j: Index) -> Vec<(Index, R::Elem)> {
        self.entries
            .iter()
            .filter(|(&(_, c), _)| c == j)
            .map(|(&(i, _), r)| (i, r.clone()))
            .collect()
    }

    /// Largest index occurring in the support, plus one.
    pub fn extent(&self) -> Index {
        self.entries
            .keys()
            .map(|&(i, j)| i.max(j) + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn restrict(&self, w: Window) -> Self {
        FiniteMatrix {
            ring: self.ring.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(&(i, j), _)| w.contains(i, j))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub(crate) fn same_ring(&self, other: &R) -> Result<(), MatrixError> {
        if &self.ring == other {
            Ok(())
        } else {
            Err(MatrixError::MixedRings {
                left: self.ring.name(),
                right: other.name(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_ring(&other.ring)?;
        let mut out = self.clone();
        for (i, j, r) in other.iter() {
            out.accumulate(i, j, r.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        FiniteMatrix {
            ring: self.ring.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (*k, self.ring.neg(v)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_ring(&other.ring)?;
        let mut rows_of_other: BTreeMap<Index, Vec<(Index, &R::Elem)>> = BTreeMap::new();
        for (k, j, b) in other.iter() {
            rows_of_other.entry(k).or_default().push((j, b));
        }
        let mut out = Self::zero(&self.ring);
        for (i, k, a) in self.iter() {
            if let Some(row) = rows_of_other.get(&k) {
                for &(j, b) in row {
                    out.accumulate(i, j, self.ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// `r·A`, entrywise left multiplication.
    pub fn scale_left(&self, r: &R::Elem) -> Self {
        FiniteMatrix::from_entries(
            &self.ring,
            self.iter().map(|(i, j, a)| (i, j, self.ring.mul(r, a))),
        )
    }

    pub fn trace(&self) -> R::Elem {
        self.ring.sum(
            self.entries
                .iter()
                .filter(|(&(i, j), _)| i == j)
                .map(|(_, r)| r),
        )
    }

    /// Tests `A = e_kk(1)·A + A·e_kk(1)` by evaluating both sides.
    pub fn lemma1_shape(&self, k: Index) -> bool {
        let e = FiniteMatrix::unit(&self.ring, k, k, self.ring.one());
        let rhs = e
            .mul(self)
            .and_then(|l| l.add(&self.mul(&e)?))
            .expect("same ring");
        let direct = rhs == *self;
        debug_assert_eq!(direct, self.lemma1_entrywise(k));
        direct
    }

    /// The entrywise form of the same criterion: every nonzero entry lies
    /// in row `k` or column `k` but not at `(k, k)`.
    pub fn lemma1_entrywise(&self, k: Index) -> bool {
        self.entries.keys().all(|&(i, j)| (i == k) != (j == k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, IntegersMod, PolyZ};
    use num_bigint::BigInt;

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn units() {
        let m = FiniteMatrix::unit(&Integers, 0, 1, z(5));
        assert_eq!(m.support(), vec![(0, 1)]);
        assert_eq!(m.entry(0, 1), z(5));
        assert!(FiniteMatrix::unit(&Integers, 2, 2, z(0)).is_zero());
        let t = FiniteMatrix::unit(&PolyZ, 1, 0, PolyZ.t());
        assert_eq!(t.get(1, 0), Some(&PolyZ.t()));
    }

    #[test]
    fn unit_products() {
        let (a, b) = (z(3), z(-4));
        let x = FiniteMatrix::unit(&Integers, 0, 1, a.clone());
        let y = FiniteMatrix::unit(&Integers, 1, 2, b.clone());
        assert_eq!(x.mul(&y).unwrap(), FiniteMatrix::unit(&Integers, 0, 2, &a * &b));
        let y2 = FiniteMatrix::unit(&Integers, 0, 2, b);
        assert!(x.mul(&y2).unwrap().is_zero());
    }

    #[test]
    fn addition_cancels() {
        let s = FiniteMatrix::unit(&Integers, 0, 1, z(2))
            .add(&FiniteMatrix::unit(&Integers, 0, 1, z(3)))
            .unwrap();
        assert_eq!(s, FiniteMatrix::unit(&Integers, 0, 1, z(5)));
        let a = FiniteMatrix::from_entries(&Integers, [(0, 0, z(1)), (3, 1, z(-2))]);
        assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = FiniteMatrix::unit(&IntegersMod::new(4).unwrap(), 0, 0, 1);
        let b = FiniteMatrix::unit(&IntegersMod::new(6).unwrap(), 0, 0, 1);
        assert!(matches!(a.add(&b), Err(MatrixError::MixedRings { .. })));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn traces() {
        let r = z(7);
        assert_eq!(FiniteMatrix::unit(&Integers, 0, 0, r.clone()).trace(), r);
        assert_eq!(FiniteMatrix::unit(&Integers, 0, 1, r).trace(), z(0));
        let d = FiniteMatrix::from_entries(&Integers, [(0, 0, z(1)), (5, 5, z(-1))]);
        assert_eq!(d.trace(), z(0));
    }

    #[test]
    fn lemma1_examples() {
        assert!(FiniteMatrix::unit(&Integers, 1, 2, z(5)).lemma1_shape(1));
        assert!(!FiniteMatrix::unit(&Integers, 1, 1, z(1)).lemma1_shape(1));
        // over Z/2, e_kk + e_kk = 0, still not equal to e_kk
        let z2 = IntegersMod::new(2).unwrap();
        assert!(!FiniteMatrix::unit(&z2, 1, 1, 1).lemma1_shape(1));
        assert!(FiniteMatrix::<Integers>::zero(&Integers).lemma1_shape(4));
    }

    #[test]
    fn row_and_column_views() {
        let a = FiniteMatrix::from_entries(&Integers, [(2, 0, z(1)), (0, 3, z(2)), (2, 3, z(4))]);
        assert_eq!(a.rows(), vec![0, 2]);
        assert_eq!(a.cols(), vec![0, 3]);
        assert_eq!(a.row_entries(2), vec![(0, z(1)), (3, z(4))]);
        assert_eq!(a.col_entries(3), vec![(0, z(2)), (2, z(4))]);
        assert_eq!(a.extent(), 4);
        assert_eq!(a.restrict(Window::new(3).unwrap()).support(), vec![(2, 0)]);
    }
}
