//! Sparse vectors and incremental Gaussian elimination over an exact field.

use std::collections::BTreeMap;

use crate::field::Field;

/// A sparse vector: `(index, coefficient)` pairs, sorted by index, no zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Accumulates linear combinations of sparse vectors.
#[derive(Clone, Debug)]
pub struct Accumulator<E> {
    terms: BTreeMap<usize, E>,
}

impl<E: Clone> Default for Accumulator<E> {
    fn default() -> Self {
        Accumulator {
            terms: BTreeMap::new(),
        }
    }
}

impl<E: Clone + PartialEq> Accumulator<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, field: &F, index: usize, c: &E) {
        if field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&index) {
            Some(x) => *x = field.add(x, c),
            None => {
                self.terms.insert(index, c.clone());
            }
        }
    }

    /// `self += c * v`
    pub fn axpy<F: Field<Elem = E>>(&mut self, field: &F, c: &E, v: &[(usize, E)]) {
        if field.is_zero(c) {
            return;
        }
        let unit = field.is_one(c);
        for (i, x) in v {
            if unit {
                self.add_term(field, *i, x);
            } else {
                self.add_term(field, *i, &field.mul(c, x));
            }
        }
    }

    pub fn finish<F: Field<Elem = E>>(self, field: &F) -> SparseVec<E> {
        self.terms
            .into_iter()
            .filter(|(_, x)| !field.is_zero(x))
            .collect()
    }
}

pub fn scale<F: Field>(field: &F, c: &F::Elem, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(c, x))).collect()
}

pub fn add<F: Field>(field: &F, a: &[(usize, F::Elem)], b: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut acc = Accumulator::new();
    acc.axpy(field, &field.one(), a);
    acc.axpy(field, &field.one(), b);
    acc.finish(field)
}

pub fn sub<F: Field>(field: &F, a: &[(usize, F::Elem)], b: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut acc = Accumulator::new();
    acc.axpy(field, &field.one(), a);
    acc.axpy(field, &field.neg(&field.one()), b);
    acc.finish(field)
}

pub fn unit<F: Field>(field: &F, i: usize) -> SparseVec<F::Elem> {
    vec![(i, field.one())]
}

/// Row echelon form built one vector at a time.
///
/// Rows are stored with their pivot (smallest column index) normalised to 1.
/// With tracking enabled every row remembers which combination of inserted
/// vectors produced it, which gives kernels and coordinates for free.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<usize>>,
    combos: Option<Vec<SparseVec<F::Elem>>>,
    inserted: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
            combos: None,
            inserted: 0,
        }
    }

    pub fn tracking(field: &F, ncols: usize) -> Self {
        let mut e = Self::new(field, ncols);
        e.combos = Some(Vec::new());
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// multiples of each row that were subtracted.
    fn reduce_with_log(&self, v: &[(usize, F::Elem)]) -> (SparseVec<F::Elem>, Vec<(usize, F::Elem)>) {
        let f = &self.field;
        let mut work: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (i, x) in v {
            assert!(*i < self.ncols, "column {i} out of range {}", self.ncols);
            if !f.is_zero(x) {
                work.insert(*i, x.clone());
            }
        }
        let mut log = Vec::new();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).find(|(col, _)| self.pivot_row[**col].is_some());
            let (col, c) = match next {
                Some((col, c)) => (*col, c.clone()),
                None => break,
            };
            let r = self.pivot_row[col].unwrap();
            for (j, y) in &self.rows[r] {
                let delta = f.mul(&c, y);
                let entry = work.entry(*j).or_insert_with(|| f.zero());
                *entry = f.sub(entry, &delta);
                if f.is_zero(entry) {
                    work.remove(j);
                }
            }
            log.push((r, c));
            cursor = col + 1;
        }
        (work.into_iter().collect(), log)
    }

    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        self.reduce_with_log(v).0
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`. Returns `Ok(())` when it enlarged the span, and otherwise
    /// the dependency among inserted vectors it revealed (empty when not
    /// tracking).
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> Result<(), SparseVec<F::Elem>> {
        let f = self.field.clone();
        let id = self.inserted;
        self.inserted += 1;
        let (rem, log) = self.reduce_with_log(v);
        let combo = self.combos.as_ref().map(|combos| {
            let mut acc = Accumulator::new();
            acc.add_term(&f, id, &f.one());
            for (r, c) in &log {
                acc.axpy(&f, &f.neg(c), &combos[*r]);
            }
            acc.finish(&f)
        });
        if rem.is_empty() {
            return Err(combo.unwrap_or_default());
        }
        let pinv = f.inv(&rem[0].1);
        let row = scale(&f, &pinv, &rem);
        self.pivot_row[row[0].0] = Some(self.rows.len());
        self.rows.push(row);
        if let (Some(combos), Some(combo)) = (self.combos.as_mut(), combo) {
            combos.push(scale(&f, &pinv, &combo));
        }
        Ok(())
    }

    /// Like [`Echelon::insert`], but a dependent vector does not consume an
    /// insertion id. Returns whether the span grew.
    pub fn insert_if_independent(&mut self, v: &[(usize, F::Elem)]) -> bool {
        match self.insert(v) {
            Ok(()) => true,
            Err(_) => {
                self.inserted -= 1;
                false
            }
        }
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in
    /// their span. Requires tracking.
    pub fn express(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let combos = self.combos.as_ref().expect("express requires a tracking echelon");
        let (rem, log) = self.reduce_with_log(v);
        if !rem.is_empty() {
            return None;
        }
        let mut acc = Accumulator::new();
        for (r, c) in &log {
            acc.axpy(&self.field, c, &combos[*r]);
        }
        Some(acc.finish(&self.field))
    }
}

/// Rank of the span of `vectors`.
pub fn rank<F: Field>(field: &F, ncols: usize, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut e = Echelon::new(field, ncols);
    for v in vectors {
        let _ = e.insert(v);
    }
    e.rank()
}

/// Kernel of the linear map sending the `j`-th source basis vector to
/// `images[j]`, as vectors in source coordinates.
pub fn kernel<F: Field>(field: &F, target_dim: usize, images: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let mut e = Echelon::tracking(field, target_dim);
    let mut out = Vec::new();
    for v in images {
        if let Err(dep) = e.insert(v) {
            out.push(dep);
        }
    }
    out
}

/// A subspace with a fixed basis, able to produce coordinates of members.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    basis: Vec<SparseVec<F::Elem>>,
    echelon: Echelon<F>,
}

impl<F: Field> Subspace<F> {
    /// Builds a subspace from a spanning set, keeping an independent subset
    /// as the basis.
    pub fn spanned_by(field: &F, ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec<F::Elem>>) -> Self {
        let mut echelon = Echelon::tracking(field, ambient_dim);
        let mut basis = Vec::new();
        for v in vectors {
            if echelon.insert_if_independent(&v) {
                basis.push(v);
            }
        }
        Subspace { basis, echelon }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<F::Elem>] {
        &self.basis
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.echelon.contains(v)
    }

    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        self.echelon.express(v)
    }

    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        self.echelon.reduce(v)
    }
}
