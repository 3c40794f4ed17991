use std::sync::Arc;

use crate::dgalg::{tensor_algebra, DgAlgebra};
use crate::error::{mismatch, structural, Result};
use crate::linalg::sparse::{axpy, collect_terms};
use crate::linalg::{Field, GradedSpace, Scalar, SparseMatrix, SparseVec};
use crate::report::AlgebraReport;

/// A finite-dimensional dg `A`–`B`-bimodule.
///
/// `lact[a]` is the matrix of `m ↦ b_a · m` and `ract[b]` that of `m ↦ m · b_b`.
/// The basis is adapted to the idempotents of both algebras; `block[i]` records
/// the pair `(u, v)` with `e_u m_i e_v = m_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgBimodule {
    pub(crate) left: Arc<DgAlgebra>,
    pub(crate) right: Arc<DgAlgebra>,
    pub(crate) space: GradedSpace,
    pub(crate) lact: Vec<SparseMatrix>,
    pub(crate) ract: Vec<SparseMatrix>,
    pub(crate) diff: SparseMatrix,
    pub(crate) block: Vec<(usize, usize)>,
}

pub(crate) fn same_algebra(a: &Arc<DgAlgebra>, b: &Arc<DgAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn block_of(alg: &DgAlgebra, act: impl Fn(&SparseVec) -> SparseVec, v: &SparseVec) -> Option<usize> {
    (0..alg.idempotents().len()).find(|&u| &act(&alg.idempotents()[u]) == v)
}

impl DgBimodule {
    /// Builds a bimodule from sparse tables: `left` holds `(a, m, k, c)` meaning
    /// `b_a · m_m` contains `c m_k`, `right` holds `(m, b, k, c)` meaning
    /// `m_m · b_b` contains `c m_k`, and `diff` holds `(i, j, c)` meaning `∂ m_i`
    /// contains `c m_j`.
    pub fn new(
        left: Arc<DgAlgebra>,
        right: Arc<DgAlgebra>,
        space: GradedSpace,
        left_table: Vec<(usize, usize, usize, Scalar)>,
        right_table: Vec<(usize, usize, usize, Scalar)>,
        diff: Vec<(usize, usize, Scalar)>,
    ) -> Result<Self> {
        let n = space.dim();
        let field = space.field;
        if left.field() != field || right.field() != field {
            return Err(mismatch("bimodule and algebras over different fields"));
        }
        let mut lt = vec![Vec::new(); left.dim()];
        for (a, m, k, c) in left_table {
            if a >= left.dim() || m >= n || k >= n {
                return Err(structural(format!("left action entry ({a},{m},{k}) out of range")));
            }
            lt[a].push((k, m, c));
        }
        let mut rt = vec![Vec::new(); right.dim()];
        for (m, b, k, c) in right_table {
            if b >= right.dim() || m >= n || k >= n {
                return Err(structural(format!("right action entry ({m},{b},{k}) out of range")));
            }
            rt[b].push((k, m, c));
        }
        let mut dt = Vec::new();
        for (i, j, c) in diff {
            if i >= n || j >= n {
                return Err(structural(format!("differential entry ({i},{j}) out of range")));
            }
            dt.push((j, i, c));
        }
        let lact = lt.into_iter().map(|t| SparseMatrix::from_triples(n, n, field, t)).collect();
        let ract = rt.into_iter().map(|t| SparseMatrix::from_triples(n, n, field, t)).collect();
        let diff = SparseMatrix::from_triples(n, n, field, dt);
        Self::from_parts(left, right, space, lact, ract, diff)
    }

    /// Assembles a bimodule from action matrices, computing the idempotent blocks.
    pub fn from_parts(
        left: Arc<DgAlgebra>,
        right: Arc<DgAlgebra>,
        space: GradedSpace,
        lact: Vec<SparseMatrix>,
        ract: Vec<SparseMatrix>,
        diff: SparseMatrix,
    ) -> Result<Self> {
        let mut m = DgBimodule { left, right, space, lact, ract, diff, block: Vec::new() };
        m.block = m.compute_blocks()?;
        Ok(m)
    }

    pub(crate) fn compute_blocks(&self) -> Result<Vec<(usize, usize)>> {
        let mut block = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let v = self.basis_vec(i);
            let u = block_of(&self.left, |e| self.act_left(e, &v), &v);
            let w = block_of(&self.right, |e| self.act_right(&v, e), &v);
            match (u, w) {
                (Some(u), Some(w)) => block.push((u, w)),
                _ => {
                    return Err(structural(format!(
                        "basis element {} is not adapted to the idempotents",
                        self.space.label(i)
                    )))
                }
            }
        }
        Ok(block)
    }

    /// `A` as an `A`–`A`-bimodule.
    pub fn regular(a: Arc<DgAlgebra>) -> Self {
        let n = a.dim();
        let field = a.field();
        let lact = (0..n)
            .map(|i| SparseMatrix::from_columns(n, field, (0..n).map(|j| a.mul_basis(i, j).clone()).collect()))
            .collect();
        let ract = (0..n)
            .map(|j| SparseMatrix::from_columns(n, field, (0..n).map(|i| a.mul_basis(i, j).clone()).collect()))
            .collect();
        let diff = SparseMatrix::from_columns(n, field, (0..n).map(|i| a.diff_basis(i).clone()).collect());
        let block = (0..n).map(|i| a.block(i)).collect();
        DgBimodule { left: a.clone(), right: a.clone(), space: a.space().clone(), lact, ract, diff, block }
    }

    /// `A` as a left module, i.e. an `A`–`k`-bimodule.
    pub fn left_regular(a: Arc<DgAlgebra>) -> Self {
        let k = Arc::new(DgAlgebra::ground_field(a.field()));
        let r = Self::regular(a);
        let n = r.dim();
        let block = r.block.iter().map(|&(u, _)| (u, 0)).collect();
        DgBimodule { right: k, ract: vec![SparseMatrix::identity(n, r.field())], block, ..r }
    }

    /// `A` as a right module, i.e. a `k`–`A`-bimodule.
    pub fn right_regular(a: Arc<DgAlgebra>) -> Self {
        let k = Arc::new(DgAlgebra::ground_field(a.field()));
        let r = Self::regular(a);
        let n = r.dim();
        let block = r.block.iter().map(|&(_, v)| (0, v)).collect();
        DgBimodule { left: k, lact: vec![SparseMatrix::identity(n, r.field())], block, ..r }
    }

    /// The zero bimodule.
    pub fn zero(left: Arc<DgAlgebra>, right: Arc<DgAlgebra>) -> Self {
        let field = left.field();
        DgBimodule {
            lact: vec![SparseMatrix::zero(0, 0, field); left.dim()],
            ract: vec![SparseMatrix::zero(0, 0, field); right.dim()],
            left,
            right,
            space: GradedSpace::zero(field),
            diff: SparseMatrix::zero(0, 0, field),
            block: Vec::new(),
        }
    }

    pub fn left_algebra(&self) -> &Arc<DgAlgebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<DgAlgebra> {
        &self.right
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.space.basis.iter().position(|(l, _)| l == label)
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn block(&self, i: usize) -> (usize, usize) {
        self.block[i]
    }

    pub fn diff(&self) -> &SparseMatrix {
        &self.diff
    }

    pub fn left_action(&self, a: usize) -> &SparseMatrix {
        &self.lact[a]
    }

    pub fn right_action(&self, b: usize) -> &SparseMatrix {
        &self.ract[b]
    }

    pub fn basis_vec(&self, i: usize) -> SparseVec {
        vec![(i, self.field().one())]
    }

    pub fn act_left(&self, a: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (i, c) in a {
            acc = axpy(&acc, c, &self.lact[*i].apply(m));
        }
        acc
    }

    pub fn act_right(&self, m: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (j, c) in b {
            acc = axpy(&acc, c, &self.ract[*j].apply(m));
        }
        acc
    }

    pub fn d(&self, m: &SparseVec) -> SparseVec {
        self.diff.apply(m)
    }

    /// Sparse tables in the form accepted by [`DgBimodule::new`].
    pub fn tables(&self) -> (Vec<(usize, usize, usize, Scalar)>, Vec<(usize, usize, usize, Scalar)>, Vec<(usize, usize, Scalar)>) {
        let mut l = Vec::new();
        for (a, m) in self.lact.iter().enumerate() {
            for (k, i, c) in m.entries() {
                l.push((a, i, k, c.clone()));
            }
        }
        l.sort_by_key(|t| (t.1, t.0, t.2));
        let mut r = Vec::new();
        for (b, m) in self.ract.iter().enumerate() {
            for (k, i, c) in m.entries() {
                r.push((i, b, k, c.clone()));
            }
        }
        r.sort_by_key(|t| (t.0, t.1, t.2));
        let mut d: Vec<_> = self.diff.entries().map(|(j, i, c)| (i, j, c.clone())).collect();
        d.sort_by_key(|t| (t.0, t.1));
        (l, r, d)
    }

    /// Exhaustive check of the dg bimodule axioms over the bases.
    pub fn check(&self) -> AlgebraReport {
        let mut r = AlgebraReport::new();
        let (a, b) = (&*self.left, &*self.right);
        let n = self.dim();
        let field = self.field();
        let lab = |i: usize| self.label(i).to_string();
        for i in 0..n {
            let m = self.basis_vec(i);
            if self.act_left(a.unit(), &m) != m {
                r.fail("left-unital", vec![lab(i)]);
            }
            if self.act_right(&m, b.unit()) != m {
                r.fail("right-unital", vec![lab(i)]);
            }
            let dm = self.d(&m);
            if dm.iter().any(|(k, _)| self.degree(*k) != self.degree(i) + 1) {
                r.fail("differential-degree", vec![lab(i)]);
            }
            if !self.d(&dm).is_empty() {
                r.fail("differential-squares-to-zero", vec![lab(i)]);
            }
            for x in 0..a.dim() {
                let xm = self.lact[x].apply(&m);
                if xm.iter().any(|(k, _)| self.degree(*k) != self.degree(i) + a.degree(x)) {
                    r.fail("left-action-degree", vec![a.label(x).into(), lab(i)]);
                }
                // ∂(xm) = ∂x·m + (-1)^{|x|} x·∂m
                let rhs = axpy(
                    &self.act_left(a.diff_basis(x), &m),
                    &field.sign(a.degree(x)),
                    &self.lact[x].apply(&dm),
                );
                if self.d(&xm) != rhs {
                    r.fail("left-leibniz", vec![a.label(x).into(), lab(i)]);
                }
                if !r.failed("left-associativity") {
                    for y in 0..a.dim() {
                        if self.act_left(a.mul_basis(x, y), &m) != self.lact[x].apply(&self.lact[y].apply(&m)) {
                            r.fail("left-associativity", vec![a.label(x).into(), a.label(y).into(), lab(i)]);
                            break;
                        }
                    }
                }
                if !r.failed("actions-commute") {
                    for y in 0..b.dim() {
                        if self.ract[y].apply(&xm) != self.lact[x].apply(&self.ract[y].apply(&m)) {
                            r.fail("actions-commute", vec![a.label(x).into(), lab(i), b.label(y).into()]);
                            break;
                        }
                    }
                }
            }
            for y in 0..b.dim() {
                let my = self.ract[y].apply(&m);
                if my.iter().any(|(k, _)| self.degree(*k) != self.degree(i) + b.degree(y)) {
                    r.fail("right-action-degree", vec![lab(i), b.label(y).into()]);
                }
                // ∂(my) = ∂m·y + (-1)^{|m|} m·∂y
                let rhs = axpy(
                    &self.ract[y].apply(&dm),
                    &field.sign(self.degree(i)),
                    &self.act_right(&m, b.diff_basis(y)),
                );
                if self.d(&my) != rhs {
                    r.fail("right-leibniz", vec![lab(i), b.label(y).into()]);
                }
                if !r.failed("right-associativity") {
                    for z in 0..b.dim() {
                        if self.act_right(&m, b.mul_basis(y, z)) != self.ract[z].apply(&my) {
                            r.fail("right-associativity", vec![lab(i), b.label(y).into(), b.label(z).into()]);
                            break;
                        }
                    }
                }
            }
        }
        r
    }

    /// `M⟨k⟩`: degrees drop by `k`, the differential picks up `(-1)^k` and the
    /// left action `(-1)^{k|a|}`.
    pub fn shift(&self, k: i64) -> DgBimodule {
        if k == 0 {
            return self.clone();
        }
        let field = self.field();
        let sk = field.sign(k);
        let lact = self
            .lact
            .iter()
            .enumerate()
            .map(|(a, m)| if (k * self.left.degree(a)) % 2 != 0 { -m } else { m.clone() })
            .collect();
        DgBimodule {
            left: self.left.clone(),
            right: self.right.clone(),
            space: self.space.shifted(k),
            lact,
            ract: self.ract.clone(),
            diff: self.diff.scaled(&sk),
            block: self.block.clone(),
        }
    }

    /// The `k`-linear dual, a `B`–`A`-bimodule: `(φ·a)(m) = φ(a m)`,
    /// `(b·φ)(m) = (-1)^{|b|} φ(m b)`, `(∂φ)(m) = -(-1)^{|φ|} φ(∂m)`.
    pub fn dual(&self) -> DgBimodule {
        let field = self.field();
        let n = self.dim();
        let space = GradedSpace {
            field,
            basis: self.space.basis.iter().map(|(l, d)| (format!("{l}*"), -d)).collect(),
        };
        // φ_i·a = Σ_k (a m_k)_i φ_k, i.e. the transpose of lact[a].
        let ract = self.lact.iter().map(SparseMatrix::transpose).collect();
        let lact = self
            .ract
            .iter()
            .enumerate()
            .map(|(b, m)| {
                let t = m.transpose();
                if self.right.degree(b) % 2 != 0 {
                    -&t
                } else {
                    t
                }
            })
            .collect();
        let dt = self.diff.transpose();
        let diff = SparseMatrix::from_columns(
            n,
            field,
            (0..n)
                .map(|i| {
                    // |φ_i| = -|m_i|
                    let s = -field.sign(-self.degree(i));
                    dt.col(i).iter().map(|(k, c)| (*k, c * &s)).collect()
                })
                .collect(),
        );
        let block = self.block.iter().map(|&(u, v)| (v, u)).collect();
        DgBimodule { left: self.right.clone(), right: self.left.clone(), space, lact, ract, diff, block }
    }

    /// Direct sum of shifted bimodules over common algebras, with labels
    /// prefixed by the summand position.
    pub fn direct_sum(parts: &[(&DgBimodule, i64)], left: Arc<DgAlgebra>, right: Arc<DgAlgebra>) -> Result<DgBimodule> {
        let field = left.field();
        let mut basis = Vec::new();
        let mut block = Vec::new();
        let mut lact_blocks: Vec<Vec<SparseMatrix>> = vec![Vec::new(); left.dim()];
        let mut ract_blocks: Vec<Vec<SparseMatrix>> = vec![Vec::new(); right.dim()];
        let mut diffs = Vec::new();
        for (p, (m, s)) in parts.iter().enumerate() {
            if !same_algebra(&m.left, &left) || !same_algebra(&m.right, &right) {
                return Err(mismatch("direct sum of bimodules over different algebras"));
            }
            let ms = m.shift(*s);
            for (l, d) in &ms.space.basis {
                basis.push((format!("{p}:{l}"), *d));
            }
            block.extend(ms.block.iter().copied());
            for (a, x) in ms.lact.into_iter().enumerate() {
                lact_blocks[a].push(x);
            }
            for (b, x) in ms.ract.into_iter().enumerate() {
                ract_blocks[b].push(x);
            }
            diffs.push(ms.diff);
        }
        let diag = |v: Vec<SparseMatrix>| SparseMatrix::block_diag(&v.iter().collect::<Vec<_>>(), field);
        Ok(DgBimodule {
            left,
            right,
            space: GradedSpace { field, basis },
            lact: lact_blocks.into_iter().map(diag).collect(),
            ract: ract_blocks.into_iter().map(diag).collect(),
            diff: diag(diffs),
            block,
        })
    }

    /// Replaces the differential (for totalizations); callers re-check axioms.
    pub(crate) fn with_diff(mut self, diff: SparseMatrix) -> DgBimodule {
        self.diff = diff;
        self
    }
}

/// `M ⊗_k N` for an `A`–`B`-bimodule `M` and a `C`–`D`-bimodule `N`, as an
/// `A⊗C`–`B⊗D`-bimodule (ground-field factors absorbed). Signs:
/// `(a⊗c)(m⊗n) = (-1)^{|c||m|} am⊗cn`, `(m⊗n)(b⊗d) = (-1)^{|n||b|} mb⊗nd`,
/// `∂(m⊗n) = ∂m⊗n + (-1)^{|m|} m⊗∂n`.
pub fn tensor_over_k(m: &DgBimodule, n: &DgBimodule) -> Result<DgBimodule> {
    let field = m.field();
    if n.field() != field {
        return Err(mismatch("bimodules over different fields"));
    }
    let left = Arc::new(tensor_algebra(&m.left, &n.left)?);
    let right = Arc::new(tensor_algebra(&m.right, &n.right)?);
    let (p, q) = (m.dim(), n.dim());
    let idx = |i: usize, j: usize| i * q + j;
    let mut basis = Vec::with_capacity(p * q);
    for i in 0..p {
        for j in 0..q {
            basis.push((format!("{}⊗{}", m.label(i), n.label(j)), m.degree(i) + n.degree(j)));
        }
    }
    // Index pairs of the (possibly absorbed) tensor algebra bases.
    let pairs = |x: &DgAlgebra, y: &DgAlgebra| -> Vec<(usize, usize)> {
        if y.is_ground_field() {
            (0..x.dim()).map(|i| (i, 0)).collect()
        } else if x.is_ground_field() {
            (0..y.dim()).map(|j| (0, j)).collect()
        } else {
            (0..x.dim()).flat_map(|i| (0..y.dim()).map(move |j| (i, j))).collect()
        }
    };
    let lpairs = pairs(&m.left, &n.left);
    let rpairs = pairs(&m.right, &n.right);
    let mut lact = Vec::new();
    for &(a, c) in &lpairs {
        let mut triples = Vec::new();
        for i in 0..p {
            let am = m.lact[a].col(i);
            for j in 0..q {
                let s = field.sign(n.left.degree(c) * m.degree(i));
                for (k, x) in am {
                    for (l, y) in n.lact[c].col(j) {
                        triples.push((idx(*k, *l), idx(i, j), &s * &(x * y)));
                    }
                }
            }
        }
        lact.push(SparseMatrix::from_triples(p * q, p * q, field, triples));
    }
    let mut ract = Vec::new();
    for &(b, d) in &rpairs {
        let mut triples = Vec::new();
        for i in 0..p {
            let mb = m.ract[b].col(i);
            for j in 0..q {
                let s = field.sign(n.degree(j) * m.right.degree(b));
                for (k, x) in mb {
                    for (l, y) in n.ract[d].col(j) {
                        triples.push((idx(*k, *l), idx(i, j), &s * &(x * y)));
                    }
                }
            }
        }
        ract.push(SparseMatrix::from_triples(p * q, p * q, field, triples));
    }
    let mut dt = Vec::new();
    for i in 0..p {
        for j in 0..q {
            for (k, x) in m.diff.col(i) {
                dt.push((idx(*k, j), idx(i, j), x.clone()));
            }
            let s = field.sign(m.degree(i));
            for (l, y) in n.diff.col(j) {
                dt.push((idx(i, *l), idx(i, j), &s * y));
            }
        }
    }
    let diff = SparseMatrix::from_triples(p * q, p * q, field, dt);
    let nl = n.left.idempotents().len();
    let nr = n.right.idempotents().len();
    let lb = |u: usize, s: usize| if n.left.is_ground_field() { u } else if m.left.is_ground_field() { s } else { u * nl + s };
    let rb = |v: usize, t: usize| if n.right.is_ground_field() { v } else if m.right.is_ground_field() { t } else { v * nr + t };
    let mut block = Vec::with_capacity(p * q);
    for i in 0..p {
        for j in 0..q {
            let ((u, v), (s, t)) = (m.block[i], n.block[j]);
            block.push((lb(u, s), rb(v, t)));
        }
    }
    Ok(DgBimodule { left, right, space: GradedSpace::new(field, basis)?, lact, ract, diff, block })
}

/// Free-function form of [`DgBimodule::check`].
pub fn check_dg_bimodule(m: &DgBimodule) -> AlgebraReport {
    m.check()
}

/// Rows of each action matrix, precomputed for constraint assembly.
pub(crate) fn row_form(m: &SparseMatrix) -> Vec<SparseVec> {
    m.transpose().into_columns()
}

pub(crate) fn sum_terms(terms: Vec<(usize, Scalar)>) -> SparseVec {
    collect_terms(terms)
}
