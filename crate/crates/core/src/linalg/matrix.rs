use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::sparse::{from_dense, Echelon, SparseVec};
use super::{Field, LinalgError, Scalar};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// Result of [`Matrix::rref_rank_kernel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel_basis: Vec<Vec<Scalar>>,
    pub image_basis: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, field: Field) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: nrows, cols, field, data }
    }

    pub fn from_i64(rows: &[&[i64]], field: Field) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect(),
            cols,
            field,
        )
    }

    /// Builds a matrix whose `j`-th column is the sparse vector `cols[j]`.
    pub fn from_sparse_columns(nrows: usize, cols: &[SparseVec], field: Field) -> Self {
        let mut m = Matrix::zeros(nrows, cols.len(), field);
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn sparse_row(&self, i: usize) -> SparseVec {
        from_dense(self.row(i))
    }

    pub fn sparse_column(&self, j: usize) -> SparseVec {
        (0..self.rows)
            .filter(|&i| !self[(i, j)].is_zero())
            .map(|i| (i, self[(i, j)].clone()))
            .collect()
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for (i, j, v) in self.entries() {
            t[(j, i)] = v.clone();
        }
        t
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Applies the matrix to a sparse vector, returning a sparse vector.
    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![self.field.zero(); self.rows];
        for (j, x) in v {
            for i in 0..self.rows {
                let a = &self[(i, *j)];
                if !a.is_zero() {
                    acc[i] += &(a * x);
                }
            }
        }
        from_dense(&acc)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len(), self.field);
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for (i, j, v) in block.entries() {
            self[(r0 + i, c0 + j)] = v.clone();
        }
    }

    /// Selects the given rows and columns (in order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len(), self.field);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols, self.field);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols, self.field);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }

    pub fn block_diag(blocks: &[&Matrix], field: Field) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c, field);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    fn echelon_of_rows(&self) -> Echelon {
        Echelon::from_rows(self.cols, self.field, (0..self.rows).map(|i| self.sparse_row(i)))
    }

    pub fn rank(&self) -> usize {
        self.echelon_of_rows().rank()
    }

    /// Rank, kernel basis and column-space basis, all echelon-normalized.
    pub fn rref_rank_kernel(&self) -> RankKernel {
        let e = self.echelon_of_rows();
        let kernel_basis = e
            .kernel()
            .iter()
            .map(|k| super::sparse::to_dense(k, self.cols, self.field))
            .collect();
        let image = self.transpose().echelon_of_rows();
        let image_basis = image
            .rows()
            .iter()
            .map(|r| super::sparse::to_dense(r, self.rows, self.field))
            .collect();
        RankKernel { rank: e.rank(), kernel_basis, image_basis }
    }

    /// The reduced row echelon form of `self`.
    pub fn rref(&self) -> Matrix {
        let e = self.echelon_of_rows();
        let mut m = Matrix::zeros(self.rows, self.cols, self.field);
        for (i, r) in e.rows().iter().enumerate() {
            for (j, v) in r {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }

    /// A solution of `self * x = b`, or `None` when `b` is outside the column span.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension {
                expected: self.rows,
                found: b.len(),
            });
        }
        let n = self.cols;
        let rows = (0..self.rows).map(|i| {
            let mut r = self.sparse_row(i);
            if !b[i].is_zero() {
                r.push((n, b[i].clone()));
            }
            r
        });
        let e = Echelon::from_rows(n + 1, self.field, rows);
        if e.is_pivot(n) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); n];
        for (r, &p) in e.rows().iter().zip(e.pivots()) {
            if let Some((_, v)) = r.iter().find(|(c, _)| *c == n) {
                x[p] = v.clone();
            }
        }
        Ok(Some(x))
    }

    /// Solves `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            let x = self.solve(&b.column(j)).ok()??;
            cols.push(from_dense(&x));
        }
        Some(Matrix::from_sparse_columns(self.cols, &cols, self.field))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n, self.field));
        let e = aug.echelon_of_rows();
        if e.rank() < n || e.pivots().iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, self.field);
        for (i, r) in e.rows().iter().enumerate() {
            for (j, v) in r {
                if *j >= n {
                    inv[(i, j - n)] = v.clone();
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, o.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if !b.is_zero() {
                        let t = a * b;
                        out.data[i * o.cols + j] += &t;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let r = Matrix::zeros(2, 2, Q).rref_rank_kernel();
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis.len(), 2);
        assert!(r.image_basis.is_empty());
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let r = Matrix::identity(3, Q).rref_rank_kernel();
        assert_eq!(r.rank, 3);
        assert!(r.kernel_basis.is_empty());
    }

    #[test]
    fn rank_one_kernel_matches_hand_reduction() {
        // [[1,2],[2,4]]: R2 -> R2 - 2 R1 leaves x + 2y = 0, so ker = span(-2, 1)
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]], Q);
        let r = m.rref_rank_kernel();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_basis, vec![v(&[-2, 1])]);
        assert_eq!(r.image_basis, vec![v(&[1, 2])]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(2, Q);
        assert_eq!(id.solve(&v(&[5, 7])).unwrap(), Some(v(&[5, 7])));
        assert_eq!(Matrix::zeros(2, 2, Q).solve(&v(&[1, 0])).unwrap(), None);
        // x + y = 3, 2y = 4 -> y = 2, x = 1 by back-substitution
        let m = Matrix::from_i64(&[&[1, 1], &[0, 2]], Q);
        assert_eq!(m.solve(&v(&[3, 4])).unwrap(), Some(v(&[1, 2])));
        assert!(m.solve(&v(&[1])).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]], Q);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2, Q));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]], Q).inverse().is_none());
    }
}
