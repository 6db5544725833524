//! Row-reduced subspaces of `k^n` and the linear solves built on them.

use crate::exactfield::{Field, Value};

/// A subspace of `k^dim` stored as the rows of its reduced echelon form.
/// Pivots are the leftmost nonzero column of each row, rows sorted by pivot.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Value>>,
    pivots: Vec<usize>,
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pivots == other.pivots && self.rows == other.rows
    }
}
impl Eq for SubspaceBasis {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: expected {expected}, got {got}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

impl SubspaceBasis {
    pub fn zero(field: &Field, dim: usize) -> Self {
        SubspaceBasis {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &Field, dim: usize) -> Self {
        let rows = (0..dim).map(|i| unit(field, dim, i)).collect();
        SubspaceBasis {
            field: field.clone(),
            dim,
            rows,
            pivots: (0..dim).collect(),
        }
    }

    pub fn from_vectors<I>(field: &Field, dim: usize, vecs: I) -> Self
    where
        I: IntoIterator<Item = Vec<Value>>,
    {
        let mut b = SubspaceBasis::zero(field, dim);
        for v in vecs {
            b.insert(v);
        }
        b
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: Vec<Value>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !self.field.is_zero_v(x)) else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv_v(&r[p]).expect("nonzero pivot");
        let r: Vec<Value> = r.iter().map(|x| f.mul_v(x, &inv)).collect();
        for row in &mut self.rows {
            let c = row[p].clone();
            if !f.is_zero_v(&c) {
                axpy(f, row, &c, &r, p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[Value]) -> Vec<Value> {
        self.reduce_with(v, usize::MAX)
    }

    /// Like [`reduce`](Self::reduce) but only with rows whose pivot is below
    /// `limit`.
    fn reduce_with(&self, v: &[Value], limit: usize) -> Vec<Value> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if p >= limit {
                break;
            }
            let c = out[p].clone();
            if !f.is_zero_v(&c) {
                axpy(f, &mut out, &c, row, p);
            }
        }
        out
    }

    /// Basis of the vectors orthogonal (under `Σ a_i b_i`) to every row;
    /// one vector per non-pivot column.
    pub fn annihilator(&self) -> Vec<Vec<Value>> {
        let f = &self.field;
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = unit(f, self.dim, c);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = f.neg_v(&row[c]);
                }
                v
            })
            .collect()
    }

    pub fn contains(&self, v: &[Value]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero_v(x))
    }

    /// Coordinates of `v` in the rows, `None` when `v` is outside the span.
    pub fn membership(&self, v: &[Value]) -> Result<Option<Vec<Value>>, DimensionMismatch> {
        if v.len() != self.dim {
            return Err(DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if !self.contains(v) {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let mut out = self.clone();
        for r in &other.rows {
            out.insert(r.clone());
        }
        out
    }

    /// Zassenhaus: reduce `(u | u)` and `(v | 0)`; rows with vanishing left
    /// half span the intersection in their right half.
    pub fn intersection(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let f = &self.field;
        let n = self.dim;
        let z = f.zero_v();
        let mut big = SubspaceBasis::zero(f, 2 * n);
        for r in &self.rows {
            let mut v = r.clone();
            v.extend(r.iter().cloned());
            big.insert(v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.extend(std::iter::repeat(z.clone()).take(n));
            big.insert(v);
        }
        let rows = big
            .rows
            .iter()
            .zip(&big.pivots)
            .filter(|(_, &p)| p >= n)
            .map(|(r, _)| r[n..].to_vec());
        SubspaceBasis::from_vectors(f, n, rows)
    }

    /// `Σ coords_i · row_i`, inverse of [`membership`](Self::membership).
    pub fn combine(&self, coords: &[Value]) -> Vec<Value> {
        let f = &self.field;
        let mut out = vec![f.zero_v(); self.dim];
        for (row, c) in self.rows.iter().zip(coords) {
            if !f.is_zero_v(c) {
                axpy(f, &mut out, &f.neg_v(c), row, 0);
            }
        }
        out
    }
}

/// `out -= c * row`, touching columns from `start` on (entries before are
/// zero in `row`).
fn axpy(f: &Field, out: &mut [Value], c: &Value, row: &[Value], start: usize) {
    for (o, r) in out[start..].iter_mut().zip(&row[start..]) {
        if !f.is_zero_v(r) {
            *o = f.sub_v(o, &f.mul_v(c, r));
        }
    }
}

fn unit(f: &Field, dim: usize, i: usize) -> Vec<Value> {
    let mut v = vec![f.zero_v(); dim];
    v[i] = f.one_v();
    v
}

/// Augmented elimination of `columns` (each of length `rows`): reduced rows
/// `(col_i | e_i)`.
fn augmented(field: &Field, nrows: usize, columns: &[Vec<Value>]) -> SubspaceBasis {
    let k = columns.len();
    let mut big = SubspaceBasis::zero(field, nrows + k);
    for (i, c) in columns.iter().enumerate() {
        assert_eq!(c.len(), nrows, "column length");
        let mut v = c.clone();
        v.extend(unit(field, k, i));
        big.insert(v);
    }
    big
}

/// Basis of `{c : Σ c_i columns_i = 0}`.
pub fn kernel(field: &Field, nrows: usize, columns: &[Vec<Value>]) -> SubspaceBasis {
    let big = augmented(field, nrows, columns);
    let rows = big
        .rows
        .iter()
        .zip(&big.pivots)
        .filter(|(_, &p)| p >= nrows)
        .map(|(r, _)| r[nrows..].to_vec());
    SubspaceBasis::from_vectors(field, columns.len(), rows)
}

/// Basis of `{c : r · c = 0 for every row r}`, with `ncols` unknowns.
pub fn null_space<I>(field: &Field, ncols: usize, rows: I) -> Vec<Vec<Value>>
where
    I: IntoIterator<Item = Vec<Value>>,
{
    let mut b = SubspaceBasis::zero(field, ncols);
    for r in rows {
        b.insert(r);
    }
    b.annihilator()
}

/// Prepared solver for `Σ c_i columns_i = rhs` with many right-hand sides.
pub struct LinearSolver {
    nrows: usize,
    ncols: usize,
    big: SubspaceBasis,
}

impl LinearSolver {
    pub fn new(field: &Field, nrows: usize, columns: &[Vec<Value>]) -> Self {
        LinearSolver {
            nrows,
            ncols: columns.len(),
            big: augmented(field, nrows, columns),
        }
    }

    /// Some particular solution, or `None` when `rhs` is outside the column span.
    pub fn solve(&self, rhs: &[Value]) -> Option<Vec<Value>> {
        let f = &self.big.field;
        let mut v = rhs.to_vec();
        v.extend(std::iter::repeat(f.zero_v()).take(self.ncols));
        let r = self.big.reduce_with(&v, self.nrows);
        if r[..self.nrows].iter().any(|x| !f.is_zero_v(x)) {
            return None;
        }
        Some(r[self.nrows..].iter().map(|x| f.neg_v(x)).collect())
    }
}

pub fn solve(field: &Field, nrows: usize, columns: &[Vec<Value>], rhs: &[Value]) -> Option<Vec<Value>> {
    LinearSolver::new(field, nrows, columns).solve(rhs)
}
