//! Sparse rows and reduced row echelon forms.
//!
//! Every basis the rest of the crate hands out (kernels, images, quotient
//! complements) comes from [`Echelon`], so pivoting is fixed: the pivot of a
//! row is its first nonzero column and rows are kept fully reduced.

use std::collections::HashMap;

use super::{Field, Scalar};

/// Sorted `(column, value)` pairs with no explicit zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `y += c * x` for sparse vectors.
pub fn axpy(y: &SparseVec, c: &Scalar, x: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return y.clone();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, c * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + &(c * &x[j].1);
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(x: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * c)).collect()
}

/// Collects unsorted terms (with repeats) into a canonical sparse vector.
pub fn collect_terms(mut terms: Vec<(usize, Scalar)>) -> SparseVec {
    terms.sort_by_key(|t| t.0);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (i, v) in terms {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w += &v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    out
}

pub fn to_dense(x: &SparseVec, n: usize, field: Field) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    for (i, c) in x {
        v[*i] = c.clone();
    }
    v
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// An incrementally built reduced row echelon form over a fixed number of columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    field: Field,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
    reduced: bool,
}

impl Echelon {
    pub fn new(ncols: usize, field: Field) -> Self {
        Echelon {
            ncols,
            field,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: HashMap::new(),
            reduced: true,
        }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVec>>(ncols: usize, field: Field, rows: I) -> Self {
        let mut e = Echelon::new(ncols, field);
        for r in rows {
            e.insert(r);
        }
        e.finish();
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current pivots (only pivot columns are cleared).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut start = 0;
        loop {
            let hit = v[start..]
                .iter()
                .position(|(c, _)| self.pivot_row.contains_key(c))
                .map(|p| p + start);
            match hit {
                None => return v,
                Some(pos) => {
                    let (col, coef) = v[pos].clone();
                    let r = &self.rows[self.pivot_row[&col]];
                    v = axpy(&v, &-coef, r);
                    // pivot rows have no entries left of their pivot
                    start = v.iter().position(|(c, _)| *c > col).unwrap_or(v.len());
                }
            }
        }
    }

    /// Adds a row; returns false when it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(c, _)| *c < self.ncols));
        let v = self.reduce(&v);
        let Some((lead, c)) = v.first().cloned() else {
            return false;
        };
        let v = scale(&v, &c.inv());
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push(v);
        self.pivots.push(lead);
        self.reduced = false;
        true
    }

    /// Brings the form to fully reduced shape with rows sorted by pivot.
    pub fn finish(&mut self) {
        if self.reduced {
            return;
        }
        // Rows inserted later never contain earlier pivots, so back-substitute
        // in reverse insertion order.
        for i in (0..self.rows.len()).rev() {
            let mut row = std::mem::take(&mut self.rows[i]);
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .find(|(c, _)| self.pivot_row.get(c).is_some_and(|&r| r != i))
                    .cloned();
                match hit {
                    None => break,
                    Some((col, coef)) => {
                        let r = &self.rows[self.pivot_row[&col]];
                        row = axpy(&row, &-coef, r);
                    }
                }
            }
            self.rows[i] = row;
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        self.rows = order.iter().map(|&i| std::mem::take(&mut self.rows[i])).collect();
        self.pivots = order.iter().map(|&i| self.pivots[i]).collect();
        self.pivot_row = self.pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        self.reduced = true;
    }

    pub fn rows(&self) -> &[SparseVec] {
        assert!(self.reduced, "call finish() first");
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.is_pivot(*c)).collect()
    }

    /// Kernel basis of the matrix whose rows were inserted: one vector per free
    /// column, equal to 1 there and 0 at every other free column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        assert!(self.reduced, "call finish() first");
        let free = self.free_columns();
        // column -> list of (pivot row, entry)
        let mut by_col: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter().skip(1) {
                by_col.entry(*c).or_default().push((r, v.clone()));
            }
        }
        free.iter()
            .map(|&f| {
                let mut terms: Vec<(usize, Scalar)> = vec![(f, self.field.one())];
                if let Some(entries) = by_col.get(&f) {
                    for (r, v) in entries {
                        terms.push((self.pivots[*r], -v));
                    }
                }
                collect_terms(terms)
            })
            .collect()
    }

    /// Whether `v` lies in the row span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the row basis, if `v` is in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<(usize, Scalar)>> {
        assert!(self.reduced);
        let coords: Vec<(usize, Scalar)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row.get(c).map(|&r| (r, x.clone())))
            .collect();
        let mut acc: SparseVec = Vec::new();
        for (r, x) in &coords {
            acc = axpy(&acc, x, &self.rows[*r]);
        }
        if &acc == v {
            Some(coords)
        } else {
            None
        }
    }
}

/// Rows of the matrix whose columns are `cols`.
pub fn columns_to_rows(cols: &[SparseVec], nrows: usize) -> Vec<SparseVec> {
    let mut rows: Vec<SparseVec> = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c {
            rows[*i].push((j, v.clone()));
        }
    }
    rows
}

/// Kernel of the map whose `j`-th column is `cols[j]`.
pub fn kernel_of_columns(cols: &[SparseVec], nrows: usize, field: Field) -> Vec<SparseVec> {
    Echelon::from_rows(cols.len(), field, columns_to_rows(cols, nrows)).kernel()
}

/// Some `x` with `sum_j x_j cols[j] = b`, if one exists.
pub fn solve_columns(cols: &[SparseVec], nrows: usize, b: &SparseVec, field: Field) -> Option<SparseVec> {
    let n = cols.len();
    let mut rows = columns_to_rows(cols, nrows);
    for (i, v) in b {
        rows[*i].push((n, v.clone()));
    }
    let e = Echelon::from_rows(n + 1, field, rows);
    if e.is_pivot(n) {
        return None;
    }
    let mut x = Vec::new();
    for (r, &p) in e.rows().iter().zip(e.pivots()) {
        if let Some((_, v)) = r.last().filter(|(c, _)| *c == n) {
            x.push((p, v.clone()));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from(v)
    }

    #[test]
    fn kernel_of_rank_one() {
        let e = Echelon::from_rows(2, Field::Rationals, vec![
            vec![(0, q(1)), (1, q(2))],
            vec![(0, q(2)), (1, q(4))],
        ]);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.kernel(), vec![vec![(0, q(-2)), (1, q(1))]]);
    }

    #[test]
    fn back_substitution_reduces_fully() {
        let e = Echelon::from_rows(3, Field::Rationals, vec![
            vec![(1, q(1)), (2, q(1))],
            vec![(0, q(1)), (1, q(1))],
            vec![(2, q(1))],
        ]);
        assert_eq!(e.rank(), 3);
        for (i, r) in e.rows().iter().enumerate() {
            assert_eq!(r, &vec![(i, q(1))]);
        }
    }
}
