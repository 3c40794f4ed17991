use std::ops::{Add, Mul, Neg, Sub};

use super::sparse::{axpy, collect_terms, scale, SparseVec};
use super::{Field, Matrix, Scalar};

/// Column-major sparse matrix. Column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    field: Field,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize, field: Field) -> Self {
        SparseMatrix { nrows, field, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        SparseMatrix {
            nrows: n,
            field,
            cols: (0..n).map(|i| vec![(i, field.one())]).collect(),
        }
    }

    pub fn from_columns(nrows: usize, field: Field, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.iter().all(|(i, v)| *i < nrows && !v.is_zero())));
        SparseMatrix { nrows, field, cols }
    }

    /// From unsorted `(row, col, value)` triples; repeats are summed.
    pub fn from_triples(nrows: usize, ncols: usize, field: Field, triples: Vec<(usize, usize, Scalar)>) -> Self {
        let mut by_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); ncols];
        for (i, j, v) in triples {
            by_col[j].push((i, v));
        }
        SparseMatrix { nrows, field, cols: by_col.into_iter().map(collect_terms).collect() }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        SparseMatrix {
            nrows: m.rows(),
            field: m.field(),
            cols: (0..m.cols()).map(|j| m.sparse_column(j)).collect(),
        }
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_sparse_columns(self.nrows, &self.cols, self.field)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.cols[j].binary_search_by_key(&i, |t| t.0) {
            Ok(k) => self.cols[j][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            acc = axpy(&acc, c, &self.cols[*j]);
        }
        acc
    }

    pub fn scaled(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            field: self.field,
            cols: self.cols.iter().map(|col| scale(col, c)).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                rows[*i].push((j, v.clone()));
            }
        }
        SparseMatrix { nrows: self.cols.len(), field: self.field, cols: rows }
    }

    /// Places `self` at offset `(r0, c0)` inside an `nrows x ncols` zero matrix.
    pub fn embed(&self, nrows: usize, ncols: usize, r0: usize, c0: usize) -> SparseMatrix {
        let mut out = SparseMatrix::zero(nrows, ncols, self.field);
        for (j, c) in self.cols.iter().enumerate() {
            out.cols[c0 + j] = c.iter().map(|(i, v)| (i + r0, v.clone())).collect();
        }
        out
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> SparseMatrix {
        let nrows = rows.len();
        SparseMatrix {
            nrows,
            field: self.field,
            cols: cols
                .map(|j| {
                    self.cols[j]
                        .iter()
                        .filter(|(i, _)| rows.contains(i))
                        .map(|(i, v)| (i - rows.start, v.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut pos = vec![usize::MAX; self.nrows];
        for (k, &i) in rows.iter().enumerate() {
            pos[i] = k;
        }
        SparseMatrix {
            nrows: rows.len(),
            field: self.field,
            cols: cols
                .iter()
                .map(|&j| {
                    collect_terms(
                        self.cols[j]
                            .iter()
                            .filter(|(i, _)| pos[*i] != usize::MAX)
                            .map(|(i, v)| (pos[*i], v.clone()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn block_diag(blocks: &[&SparseMatrix], field: Field) -> SparseMatrix {
        let nrows = blocks.iter().map(|b| b.nrows).sum();
        let mut cols = Vec::new();
        let mut r0 = 0;
        for b in blocks {
            for c in &b.cols {
                cols.push(c.iter().map(|(i, v)| (i + r0, v.clone())).collect());
            }
            r0 += b.nrows;
        }
        SparseMatrix { nrows, field, cols }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.nrows, other.nrows);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        SparseMatrix { nrows: self.nrows, field: self.field, cols }
    }

    /// `self` above `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.ncols());
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, v)| (i + self.nrows, v.clone())));
                c
            })
            .collect();
        SparseMatrix { nrows: self.nrows + other.nrows, field: self.field, cols }
    }

    /// Adds `c * other` into the block at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, c: &Scalar, other: &SparseMatrix) {
        assert!(r0 + other.nrows <= self.nrows && c0 + other.ncols() <= self.ncols());
        for (j, col) in other.cols.iter().enumerate() {
            let shifted: SparseVec = col.iter().map(|(i, v)| (i + r0, v.clone())).collect();
            self.cols[c0 + j] = axpy(&self.cols[c0 + j], c, &shifted);
        }
    }

    /// Entries flattened to a single sparse vector, index `i * ncols + j`.
    pub fn flatten(&self) -> SparseVec {
        let n = self.ncols();
        let mut v: SparseVec = self.entries().map(|(i, j, x)| (i * n + j, x.clone())).collect();
        v.sort_by_key(|t| t.0);
        v
    }

    pub fn unflatten(v: &SparseVec, nrows: usize, ncols: usize, field: Field) -> SparseMatrix {
        SparseMatrix::from_triples(
            nrows,
            ncols,
            field,
            v.iter().map(|(k, x)| (k / ncols, k % ncols, x.clone())).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        super::Echelon::from_rows(self.nrows, self.field, self.cols.iter().cloned()).rank()
    }

    pub fn inverse(&self) -> Option<SparseMatrix> {
        if self.nrows != self.ncols() {
            return None;
        }
        self.to_dense().inverse().map(|m| SparseMatrix::from_dense(&m))
    }
}

impl<'a> Mul<&'a SparseMatrix> for &'a SparseMatrix {
    type Output = SparseMatrix;
    /// `self ∘ other`.
    fn mul(self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows, "dimension mismatch in composition");
        SparseMatrix {
            nrows: self.nrows,
            field: self.field,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }
}

impl<'a> Add<&'a SparseMatrix> for &'a SparseMatrix {
    type Output = SparseMatrix;
    fn add(self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()), "dimension mismatch in sum");
        let one = self.field.one();
        SparseMatrix {
            nrows: self.nrows,
            field: self.field,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| axpy(a, &one, b)).collect(),
        }
    }
}

impl<'a> Sub<&'a SparseMatrix> for &'a SparseMatrix {
    type Output = SparseMatrix;
    fn sub(self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()), "dimension mismatch in difference");
        let m1 = -self.field.one();
        SparseMatrix {
            nrows: self.nrows,
            field: self.field,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| axpy(a, &m1, b)).collect(),
        }
    }
}

impl Neg for &SparseMatrix {
    type Output = SparseMatrix;
    fn neg(self) -> SparseMatrix {
        self.scaled(&-self.field.one())
    }
}
