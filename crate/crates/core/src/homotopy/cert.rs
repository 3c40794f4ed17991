use std::sync::Arc;

use crate::dgbimod::{hom_differential, is_bimodule_map, DgBimodule};
use crate::error::{mismatch, Result};
use crate::linalg::SparseMatrix;
use crate::report::AlgebraReport;

/// A homotopy equivalence `f: X ⇄ Y: g` between dg bimodules (typically the
/// totals of twisted complexes) with `g∘f - id = ∂h_src` and
/// `f∘g - id = ∂h_tgt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub source: Arc<DgBimodule>,
    pub target: Arc<DgBimodule>,
    pub f: SparseMatrix,
    pub g: SparseMatrix,
    pub h_src: SparseMatrix,
    pub h_tgt: SparseMatrix,
}

impl Certificate {
    pub fn identity(m: Arc<DgBimodule>) -> Self {
        let n = m.dim();
        let field = m.field();
        Certificate {
            source: m.clone(),
            target: m,
            f: SparseMatrix::identity(n, field),
            g: SparseMatrix::identity(n, field),
            h_src: SparseMatrix::zero(n, n, field),
            h_tgt: SparseMatrix::zero(n, n, field),
        }
    }

    /// Checks every defining identity exactly.
    pub fn verify(&self) -> AlgebraReport {
        let mut r = AlgebraReport::new();
        let (x, y) = (&*self.source, &*self.target);
        let (n, m) = (x.dim(), y.dim());
        let shape = |a: &SparseMatrix, rows: usize, cols: usize| a.nrows() == rows && a.ncols() == cols;
        if !shape(&self.f, m, n) || !shape(&self.g, n, m) || !shape(&self.h_src, n, n) || !shape(&self.h_tgt, m, m) {
            r.fail("shape", vec![]);
            return r;
        }
        if !is_bimodule_map(x, y, 0, &self.f) {
            r.fail("f-bimodule-map", vec![]);
        }
        if !is_bimodule_map(y, x, 0, &self.g) {
            r.fail("g-bimodule-map", vec![]);
        }
        if !is_bimodule_map(x, x, -1, &self.h_src) {
            r.fail("h_src-bimodule-map", vec![]);
        }
        if !is_bimodule_map(y, y, -1, &self.h_tgt) {
            r.fail("h_tgt-bimodule-map", vec![]);
        }
        if !hom_differential(x, y, 0, &self.f).is_zero() {
            r.fail("f-closed", vec![]);
        }
        if !hom_differential(y, x, 0, &self.g).is_zero() {
            r.fail("g-closed", vec![]);
        }
        let field = x.field();
        let gf = &(&self.g * &self.f) - &SparseMatrix::identity(n, field);
        if gf != hom_differential(x, x, -1, &self.h_src) {
            r.fail("gf-homotopic-to-id", vec![]);
        }
        let fg = &(&self.f * &self.g) - &SparseMatrix::identity(m, field);
        if fg != hom_differential(y, y, -1, &self.h_tgt) {
            r.fail("fg-homotopic-to-id", vec![]);
        }
        r
    }

    /// `other ∘ self`: from the source of `self` to the target of `other`.
    pub fn then(&self, other: &Certificate) -> Result<Certificate> {
        if self.target.dim() != other.source.dim() || *self.target != *other.source {
            return Err(mismatch("certificates are not composable"));
        }
        let (f1, g1, h1, k1) = (&self.f, &self.g, &self.h_src, &self.h_tgt);
        let (f2, g2, h2, k2) = (&other.f, &other.g, &other.h_src, &other.h_tgt);
        Ok(Certificate {
            source: self.source.clone(),
            target: other.target.clone(),
            f: f2 * f1,
            g: g1 * g2,
            h_src: h1 + &(&(g1 * h2) * f1),
            h_tgt: k2 + &(&(f2 * k1) * g2),
        })
    }

    /// The same equivalence read backwards.
    pub fn inverse(&self) -> Certificate {
        Certificate {
            source: self.target.clone(),
            target: self.source.clone(),
            f: self.g.clone(),
            g: self.f.clone(),
            h_src: self.h_tgt.clone(),
            h_tgt: self.h_src.clone(),
        }
    }
}
