use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::{FiniteMatrix, Index};
use crate::ring::Ring;

/// Nonzero entries of one row or column: ascending index, no zeros.
pub type Line<E> = Arc<Vec<(Index, E)>>;

pub(crate) type Accessor<E> = Arc<dyn Fn(Index) -> Vec<(Index, E)> + Send + Sync>;

struct Inner<R: Ring> {
    ring: R,
    label: String,
    col: Accessor<R::Elem>,
    row: Option<Accessor<R::Elem>>,
    /// user-supplied accessors get their lists checked on first access
    checked: bool,
    col_memo: Mutex<HashMap<Index, Line<R::Elem>>>,
    row_memo: Mutex<HashMap<Index, Line<R::Elem>>>,
    defect: Mutex<Option<String>>,
}

/// An accessor-backed matrix: an element of `M(I, R)` when only columns
/// are available, of `M_rcf(I, R)` when rows are available too.
///
/// Columns and rows are memoized. Cloning shares the memo.
pub struct Operator<R: Ring> {
    inner: Arc<Inner<R>>,
}

impl<R: Ring> Clone for Operator<R> {
    fn clone(&self) -> Self {
        Operator {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<R: Ring> fmt::Debug for Operator<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("label", &self.inner.label)
            .field("ring", &self.inner.ring.name())
            .field("rcf", &self.is_rcf())
            .finish()
    }
}

enum Axis {
    Col,
    Row,
}

impl<R: Ring> Operator<R> {
    fn build(
        ring: &R,
        label: String,
        col: Accessor<R::Elem>,
        row: Option<Accessor<R::Elem>>,
        checked: bool,
    ) -> Self {
        Operator {
            inner: Arc::new(Inner {
                ring: ring.clone(),
                label,
                col,
                row,
                checked,
                col_memo: Mutex::new(HashMap::new()),
                row_memo: Mutex::new(HashMap::new()),
                defect: Mutex::new(None),
            }),
        }
    }

    /// Wraps user accessors. Supplying `row` claims membership in
    /// `M_rcf(I, R)`; the claim is only ever checked on windows.
    pub fn from_accessors<C, Rw>(ring: &R, label: impl Into<String>, col: C, row: Option<Rw>) -> Self
    where
        C: Fn(Index) -> Vec<(Index, R::Elem)> + Send + Sync + 'static,
        Rw: Fn(Index) -> Vec<(Index, R::Elem)> + Send + Sync + 'static,
    {
        let row = row.map(|r| Arc::new(r) as Accessor<R::Elem>);
        Self::build(ring, label.into(), Arc::new(col), row, true)
    }

    /// Column-finite operator without a row accessor.
    pub fn column_finite<C>(ring: &R, label: impl Into<String>, col: C) -> Self
    where
        C: Fn(Index) -> Vec<(Index, R::Elem)> + Send + Sync + 'static,
    {
        Self::build(ring, label.into(), Arc::new(col), None, true)
    }

    /// Internal constructor for accessors that are canonical by construction.
    pub(crate) fn derived(
        ring: &R,
        label: String,
        col: Accessor<R::Elem>,
        row: Option<Accessor<R::Elem>>,
    ) -> Self {
        Self::build(ring, label, col, row, false)
    }

    /// `diag(f)`: `f(j)` at `(j, j)`.
    pub fn diag<F>(ring: &R, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Index) -> R::Elem + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let ring2 = ring.clone();
        let line: Accessor<R::Elem> = Arc::new(move |j| {
            let v = f(j);
            if ring2.is_zero(&v) {
                Vec::new()
            } else {
                vec![(j, v)]
            }
        });
        Self::derived(ring, label.into(), Arc::clone(&line), Some(line))
    }

    pub fn identity(ring: &R) -> Self {
        let one = ring.one();
        Self::diag(ring, "identity", move |_| one.clone())
    }

    /// The shift `S = Σ_k e_{k+1,k}(1)`.
    pub fn shift(ring: &R) -> Self {
        let one = ring.one();
        let one2 = one.clone();
        Self::derived(
            ring,
            "shift".into(),
            Arc::new(move |j| vec![(j + 1, one.clone())]),
            Some(Arc::new(move |i| {
                if i == 0 {
                    Vec::new()
                } else {
                    vec![(i - 1, one2.clone())]
                }
            })),
        )
    }

    /// All ones in row `r`, zero elsewhere: column-finite but not
    /// row-finite.
    pub fn ones_row(ring: &R, r: Index) -> Self {
        let one = ring.one();
        Self::derived(
            ring,
            format!("ones_row({r})"),
            Arc::new(move |_| vec![(r, one.clone())]),
            None,
        )
    }

    pub fn from_finite(m: &FiniteMatrix<R>) -> Self {
        let mut cols: HashMap<Index, Vec<(Index, R::Elem)>> = HashMap::new();
        let mut rows: HashMap<Index, Vec<(Index, R::Elem)>> = HashMap::new();
        for (i, j, r) in m.iter() {
            cols.entry(j).or_default().push((i, r.clone()));
            rows.entry(i).or_default().push((j, r.clone()));
        }
        for list in cols.values_mut() {
            list.sort_by_key(|e| e.0);
        }
        let (cols, rows) = (Arc::new(cols), Arc::new(rows));
        Self::derived(
            m.ring(),
            "finite".into(),
            Arc::new(move |j| cols.get(&j).cloned().unwrap_or_default()),
            Some(Arc::new(move |i| rows.get(&i).cloned().unwrap_or_default())),
        )
    }

    pub fn ring(&self) -> &R {
        &self.inner.ring
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn is_rcf(&self) -> bool {
        self.inner.row.is_some()
    }

    /// First malformed list seen from a user accessor, if any.
    pub fn defect(&self) -> Option<String> {
        self.inner.defect.lock().unwrap().clone()
    }

    pub fn col(&self, j: Index) -> Line<R::Elem> {
        self.line(Axis::Col, j).expect("column accessor is always present")
    }

    /// `None` when the operator has no row accessor.
    pub fn row(&self, i: Index) -> Option<Line<R::Elem>> {
        self.line(Axis::Row, i)
    }

    pub fn entry(&self, i: Index, j: Index) -> R::Elem {
        let col = self.col(j);
        match col.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => col[p].1.clone(),
            Err(_) => self.inner.ring.zero(),
        }
    }

    fn line(&self, axis: Axis, k: Index) -> Option<Line<R::Elem>> {
        let (accessor, memo, what) = match axis {
            Axis::Col => (Some(&self.inner.col), &self.inner.col_memo, "column"),
            Axis::Row => (self.inner.row.as_ref(), &self.inner.row_memo, "row"),
        };
        let accessor = accessor?;
        if let Some(hit) = memo.lock().unwrap().get(&k) {
            return Some(Arc::clone(hit));
        }
        let raw = accessor(k);
        let list = if self.inner.checked {
            self.canonicalize(raw, what, k)
        } else {
            raw
        };
        let mut memo = memo.lock().unwrap();
        // a concurrent fill may have won the race; both values agree
        Some(Arc::clone(memo.entry(k).or_insert_with(|| Arc::new(list))))
    }

    fn canonicalize(&self, raw: Vec<(Index, R::Elem)>, what: &str, k: Index) -> Vec<(Index, R::Elem)> {
        let ring = &self.inner.ring;
        let problem = if raw.windows(2).any(|w| w[0].0 >= w[1].0) {
            Some("not strictly ascending")
        } else if raw.iter().any(|(_, r)| ring.is_zero(r)) {
            Some("stores a zero")
        } else if raw.iter().any(|(_, r)| !ring.contains(r)) {
            Some("holds a foreign element")
        } else {
            None
        };
        let Some(problem) = problem else {
            return raw;
        };
        let mut defect = self.inner.defect.lock().unwrap();
        if defect.is_none() {
            *defect = Some(format!("{} {what} {k} {problem}", self.inner.label));
        }
        let mut merged: std::collections::BTreeMap<Index, R::Elem> = Default::default();
        for (i, r) in raw {
            let acc = merged.remove(&i).unwrap_or_else(|| ring.zero());
            merged.insert(i, ring.add(&acc, &r));
        }
        merged.into_iter().filter(|(_, r)| !ring.is_zero(r)).collect()
    }
}
