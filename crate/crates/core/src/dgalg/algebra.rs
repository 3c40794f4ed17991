use crate::error::{structural, Result};
use crate::linalg::sparse::{axpy, collect_terms};
use crate::linalg::{Field, GradedSpace, Scalar, SparseVec};
use crate::report::AlgebraReport;

/// A finite-dimensional dg algebra given by structure constants.
///
/// Besides the tables, an algebra carries a complete family of orthogonal,
/// closed, degree-0 idempotents and a set of generators. The basis is adapted
/// to the idempotents: every basis element `b` satisfies `e_u b e_v = b` for a
/// unique pair `(u, v)`, recorded in `block`. Generators together with the
/// idempotents generate the algebra; bimodule-map constraints only need them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    pub(crate) name: String,
    pub(crate) space: GradedSpace,
    pub(crate) unit: SparseVec,
    pub(crate) mult: Vec<Vec<SparseVec>>,
    pub(crate) diff: Vec<SparseVec>,
    pub(crate) idempotents: Vec<SparseVec>,
    pub(crate) generators: Vec<usize>,
    pub(crate) block: Vec<(usize, usize)>,
}

impl DgAlgebra {
    /// Builds an algebra from sparse tables: `mult` holds `(i, j, k, c)` meaning
    /// `b_i b_j` contains `c b_k`, and `diff` holds `(i, j, c)` meaning `∂ b_i`
    /// contains `c b_j`.
    pub fn new(
        name: impl Into<String>,
        space: GradedSpace,
        unit: SparseVec,
        mult: Vec<(usize, usize, usize, Scalar)>,
        diff: Vec<(usize, usize, Scalar)>,
    ) -> Result<Self> {
        let n = space.dim();
        let field = space.field;
        let mut table: Vec<Vec<Vec<(usize, Scalar)>>> = vec![vec![Vec::new(); n]; n];
        for (i, j, k, c) in mult {
            if i >= n || j >= n || k >= n {
                return Err(structural(format!("multiplication entry ({i},{j},{k}) out of range for dimension {n}")));
            }
            if !field.contains(&c) {
                return Err(structural("coefficient from the wrong field"));
            }
            table[i][j].push((k, c));
        }
        let mut d: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for (i, j, c) in diff {
            if i >= n || j >= n {
                return Err(structural(format!("differential entry ({i},{j}) out of range for dimension {n}")));
            }
            d[i].push((j, c));
        }
        if unit.iter().any(|(i, _)| *i >= n) {
            return Err(structural("unit vector out of range"));
        }
        let unit = collect_terms(unit);
        let mult = table
            .into_iter()
            .map(|row| row.into_iter().map(collect_terms).collect())
            .collect();
        let diff = d.into_iter().map(collect_terms).collect();
        Ok(DgAlgebra {
            name: name.into(),
            space,
            unit: unit.clone(),
            mult,
            diff,
            idempotents: vec![unit],
            generators: (0..n).collect(),
            block: vec![(0, 0); n],
        })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground_field(field: Field) -> Self {
        Self::ground_field_named(field, "1")
    }

    pub fn ground_field_named(field: Field, label: &str) -> Self {
        let space = GradedSpace { field, basis: vec![(label.to_string(), 0)] };
        DgAlgebra::new("k", space, vec![(0, field.one())], vec![(0, 0, 0, field.one())], vec![]).unwrap()
    }

    /// Replaces the idempotent family; fails unless the basis is adapted to it.
    pub fn with_idempotents(mut self, idempotents: Vec<SparseVec>) -> Result<Self> {
        let mut block = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let b = vec![(i, self.field().one())];
            let left = idempotents.iter().position(|e| self.mul(e, &b) == b);
            let right = idempotents.iter().position(|e| self.mul(&b, e) == b);
            match (left, right) {
                (Some(u), Some(v)) => block.push((u, v)),
                _ => {
                    return Err(structural(format!(
                        "basis element {} is not adapted to the idempotents",
                        self.label(i)
                    )))
                }
            }
        }
        self.idempotents = idempotents;
        self.block = block;
        Ok(self)
    }

    pub fn with_generators(mut self, generators: Vec<usize>) -> Self {
        self.generators = generators;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.space.basis.iter().position(|(l, _)| l == label)
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn idempotents(&self) -> &[SparseVec] {
        &self.idempotents
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `(u, v)` with `e_u b_i e_v = b_i`.
    pub fn block(&self, i: usize) -> (usize, usize) {
        self.block[i]
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn diff_basis(&self, i: usize) -> &SparseVec {
        &self.diff[i]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in &self.mult[*i][*j] {
                    terms.push((*k, &ab * c));
                }
            }
        }
        collect_terms(terms)
    }

    pub fn d(&self, x: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (i, c) in x {
            acc = axpy(&acc, c, &self.diff[*i]);
        }
        acc
    }

    pub fn basis_vec(&self, i: usize) -> SparseVec {
        vec![(i, self.field().one())]
    }

    /// One-dimensional, spanned by the unit.
    pub fn is_ground_field(&self) -> bool {
        self.dim() == 1 && self.unit.len() == 1
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(Vec::is_empty)
    }

    /// Whether a sparse vector is homogeneous of degree `deg` (zero counts).
    pub fn homogeneous(&self, x: &SparseVec, deg: i64) -> bool {
        x.iter().all(|(i, _)| self.degree(*i) == deg)
    }

    /// Exhaustive check of the dg algebra axioms over the basis.
    pub fn check(&self) -> AlgebraReport {
        let mut r = AlgebraReport::new();
        let n = self.dim();
        let lab = |i: usize| self.label(i).to_string();
        if !self.homogeneous(&self.unit, 0) {
            r.fail("unit-degree", vec![]);
        }
        if !self.d(&self.unit).is_empty() {
            r.fail("unit-closed", vec![]);
        }
        for i in 0..n {
            let b = self.basis_vec(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                r.fail("unit", vec![lab(i)]);
            }
            if !self.homogeneous(&self.diff[i], self.degree(i) + 1) {
                r.fail("differential-degree", vec![lab(i)]);
            }
            if !self.d(&self.diff[i]).is_empty() {
                r.fail("differential-squares-to-zero", vec![lab(i)]);
            }
            for j in 0..n {
                let ab = &self.mult[i][j];
                if !self.homogeneous(ab, self.degree(i) + self.degree(j)) {
                    r.fail("multiplication-degree", vec![lab(i), lab(j)]);
                }
                // ∂(ab) = ∂(a) b + (-1)^{|a|} a ∂(b)
                let lhs = self.d(ab);
                let t1 = self.mul(&self.diff[i], &self.basis_vec(j));
                let t2 = self.mul(&self.basis_vec(i), &self.diff[j]);
                let sign = self.field().sign(self.degree(i));
                if lhs != axpy(&t1, &sign, &t2) {
                    r.fail("leibniz", vec![lab(i), lab(j)]);
                }
                if r.failed("associativity") {
                    continue;
                }
                for k in 0..n {
                    let left = self.mul(ab, &self.basis_vec(k));
                    let right = self.mul(&self.basis_vec(i), &self.mult[j][k]);
                    if left != right {
                        r.fail("associativity", vec![lab(i), lab(j), lab(k)]);
                        break;
                    }
                }
            }
        }
        for (u, e) in self.idempotents.iter().enumerate() {
            if !self.homogeneous(e, 0) || !self.d(e).is_empty() {
                r.fail("idempotent-closed", vec![format!("e{u}")]);
            }
            for (v, f) in self.idempotents.iter().enumerate() {
                let ef = self.mul(e, f);
                let expected = if u == v { e.clone() } else { Vec::new() };
                if ef != expected {
                    r.fail("idempotents-orthogonal", vec![format!("e{u}"), format!("e{v}")]);
                }
            }
        }
        let total = self.idempotents.iter().fold(Vec::new(), |acc, e| axpy(&acc, &self.field().one(), e));
        if total != self.unit {
            r.fail("idempotents-sum-to-unit", vec![]);
        }
        r
    }

    /// Whether `x` commutes with every basis element (meant for degree-0 `x`).
    pub fn is_central(&self, x: &SparseVec) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vec(i);
            self.mul(x, &b) == self.mul(&b, x)
        })
    }
}

/// Free-function form of [`DgAlgebra::check`].
pub fn check_dg_algebra(a: &DgAlgebra) -> AlgebraReport {
    a.check()
}
