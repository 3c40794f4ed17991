use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::bimodule::{row_form, same_algebra, sum_terms, DgBimodule};
use crate::error::{mismatch, precondition, Result};
use crate::linalg::sparse::{axpy, Echelon};
use crate::linalg::{Complex, Field, GradedSpace, Scalar, SparseMatrix, SparseVec};

/// A homogeneous bimodule map. Composition carries no sign; the Koszul rule
/// only enters through tensor products of maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    pub source: Arc<DgBimodule>,
    pub target: Arc<DgBimodule>,
    pub degree: i64,
    pub matrix: SparseMatrix,
}

impl BimoduleMap {
    pub fn new(source: Arc<DgBimodule>, target: Arc<DgBimodule>, degree: i64, matrix: SparseMatrix) -> Self {
        assert_eq!(matrix.nrows(), target.dim());
        assert_eq!(matrix.ncols(), source.dim());
        BimoduleMap { source, target, degree, matrix }
    }

    pub fn identity(m: Arc<DgBimodule>) -> Self {
        let id = SparseMatrix::identity(m.dim(), m.field());
        BimoduleMap { source: m.clone(), target: m, degree: 0, matrix: id }
    }

    pub fn zero(source: Arc<DgBimodule>, target: Arc<DgBimodule>, degree: i64) -> Self {
        let z = SparseMatrix::zero(target.dim(), source.dim(), source.field());
        BimoduleMap { source, target, degree, matrix: z }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BimoduleMap) -> BimoduleMap {
        BimoduleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `∂f = ∂_N f - (-1)^{|f|} f ∂_M`.
    pub fn d(&self) -> BimoduleMap {
        BimoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree + 1,
            matrix: hom_differential(&self.source, &self.target, self.degree, &self.matrix),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.d().matrix.is_zero()
    }

    /// Checks degree preservation and `f(am) = (-1)^{|f||a|} a f(m)`, `f(mb) = f(m) b`.
    pub fn is_bimodule_map(&self) -> bool {
        is_bimodule_map(&self.source, &self.target, self.degree, &self.matrix)
    }

    pub fn scaled(&self, c: &Scalar) -> BimoduleMap {
        BimoduleMap { matrix: self.matrix.scaled(c), ..self.clone() }
    }

    pub fn add(&self, other: &BimoduleMap) -> BimoduleMap {
        BimoduleMap { matrix: &self.matrix + &other.matrix, ..self.clone() }
    }

    pub fn sub(&self, other: &BimoduleMap) -> BimoduleMap {
        BimoduleMap { matrix: &self.matrix - &other.matrix, ..self.clone() }
    }
}

pub fn hom_differential(m: &DgBimodule, n: &DgBimodule, degree: i64, f: &SparseMatrix) -> SparseMatrix {
    let a = n.diff() * f;
    let b = f * m.diff();
    if degree % 2 == 0 {
        &a - &b
    } else {
        &a + &b
    }
}

pub fn is_bimodule_map(m: &DgBimodule, n: &DgBimodule, degree: i64, f: &SparseMatrix) -> bool {
    let field = m.field();
    for i in 0..f.ncols() {
        for (j, _) in f.col(i) {
            if n.degree(*j) != m.degree(i) + degree || n.block(*j) != m.block(i) {
                return false;
            }
        }
    }
    for a in 0..m.left.dim() {
        let s = field.sign(degree * m.left.degree(a));
        let lhs = f * m.left_action(a);
        let rhs = (n.left_action(a) * f).scaled(&s);
        if lhs != rhs {
            return false;
        }
    }
    for b in 0..m.right.dim() {
        if &(f * m.right_action(b)) != &(n.right_action(b) * f) {
            return false;
        }
    }
    true
}

/// The degree-`d` bimodule maps `M → N`, as the kernel of the action
/// constraints on the entries allowed by degree and idempotent block.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub degree: i64,
    rows: usize,
    cols: usize,
    field: Field,
    /// Variable `k` is the entry `(vars[k].0, vars[k].1)`, ordered column-major.
    vars: Vec<(usize, usize)>,
    basis: Vec<SparseVec>,
    /// `free[k]` is the variable at which basis vector `k` is 1 and all others vanish.
    free: Vec<usize>,
}

impl HomSpace {
    pub fn new(m: &DgBimodule, n: &DgBimodule, degree: i64) -> Result<Self> {
        if !same_algebra(&m.left, &n.left) || !same_algebra(&m.right, &n.right) {
            return Err(mismatch("hom between bimodules over different algebras"));
        }
        let field = m.field();
        let mut vars = Vec::new();
        // group target indices by (degree, block)
        let mut by_key: HashMap<(i64, (usize, usize)), Vec<usize>> = HashMap::new();
        for j in 0..n.dim() {
            by_key.entry((n.degree(j), n.block(j))).or_default().push(j);
        }
        for i in 0..m.dim() {
            if let Some(js) = by_key.get(&(m.degree(i) + degree, m.block(i))) {
                for &j in js {
                    vars.push((j, i));
                }
            }
        }
        let var_index: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut targets_of: Vec<Vec<usize>> = vec![Vec::new(); m.dim()];
        for &(j, i) in &vars {
            targets_of[i].push(j);
        }
        let mut eqs: Vec<SparseVec> = Vec::new();
        let mut push_eqs = |per_target: HashMap<usize, Vec<(usize, Scalar)>>| {
            for (_, terms) in per_target {
                let row = sum_terms(terms);
                if !row.is_empty() {
                    eqs.push(row);
                }
            }
        };
        // left constraints: Σ_k (a m_i)_k f_{t,k} - s Σ_l (a n_l)_t f_{l,i} = 0
        for &a in m.left.generators() {
            let s = field.sign(degree * m.left.degree(a));
            let n_rows = row_form(n.left_action(a));
            let ma = m.left_action(a);
            for i in 0..m.dim() {
                let mut per_target: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
                for (k, c) in ma.col(i) {
                    for &t in &targets_of[*k] {
                        per_target.entry(t).or_default().push((var_index[&(t, *k)], c.clone()));
                    }
                }
                for (t, row) in n_rows.iter().enumerate() {
                    for (l, c) in row {
                        if let Some(&v) = var_index.get(&(*l, i)) {
                            per_target.entry(t).or_default().push((v, -(&s * c)));
                        }
                    }
                }
                push_eqs(per_target);
            }
        }
        // right constraints: Σ_k (m_i b)_k f_{t,k} - Σ_l (n_l b)_t f_{l,i} = 0
        for &b in m.right.generators() {
            let n_rows = row_form(n.right_action(b));
            let mb = m.right_action(b);
            for i in 0..m.dim() {
                let mut per_target: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
                for (k, c) in mb.col(i) {
                    for &t in &targets_of[*k] {
                        per_target.entry(t).or_default().push((var_index[&(t, *k)], c.clone()));
                    }
                }
                for (t, row) in n_rows.iter().enumerate() {
                    for (l, c) in row {
                        if let Some(&v) = var_index.get(&(*l, i)) {
                            per_target.entry(t).or_default().push((v, -c.clone()));
                        }
                    }
                }
                push_eqs(per_target);
            }
        }
        let e = Echelon::from_rows(vars.len(), field, eqs);
        let basis = e.kernel();
        let free = e.free_columns();
        Ok(HomSpace { degree, rows: n.dim(), cols: m.dim(), field, vars, basis, free })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, k: usize) -> SparseMatrix {
        self.from_coords(&vec![(k, self.field.one())])
    }

    pub fn elements(&self) -> Vec<SparseMatrix> {
        (0..self.dim()).map(|k| self.element(k)).collect()
    }

    pub fn from_coords(&self, c: &SparseVec) -> SparseMatrix {
        let mut v: SparseVec = Vec::new();
        for (k, x) in c {
            v = axpy(&v, x, &self.basis[*k]);
        }
        SparseMatrix::from_triples(
            self.rows,
            self.cols,
            self.field,
            v.into_iter().map(|(var, x)| (self.vars[var].0, self.vars[var].1, x)).collect(),
        )
    }

    /// Coordinates of `f` in the basis, or `None` if `f` is not in this space.
    pub fn coords(&self, f: &SparseMatrix) -> Option<SparseVec> {
        let mut c = Vec::new();
        for (k, &var) in self.free.iter().enumerate() {
            let (j, i) = self.vars[var];
            let x = f.get(j, i);
            if !x.is_zero() {
                c.push((k, x));
            }
        }
        if &self.from_coords(&c) == f {
            Some(c)
        } else {
            None
        }
    }
}

/// The Hom complex between two bimodules over the same algebras.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub source: Arc<DgBimodule>,
    pub target: Arc<DgBimodule>,
    pub spaces: BTreeMap<i64, HomSpace>,
}

impl HomComplex {
    /// All degrees in which maps can be nonzero.
    pub fn new(m: Arc<DgBimodule>, n: Arc<DgBimodule>) -> Result<Self> {
        let (lo, hi) = degree_range(&m, &n);
        Self::window(m, n, lo, hi)
    }

    /// Only the degrees `lo..=hi`.
    pub fn window(m: Arc<DgBimodule>, n: Arc<DgBimodule>, lo: i64, hi: i64) -> Result<Self> {
        let mut spaces = BTreeMap::new();
        for d in lo..=hi {
            spaces.insert(d, HomSpace::new(&m, &n, d)?);
        }
        Ok(HomComplex { source: m, target: n, spaces })
    }

    pub fn space(&self, d: i64) -> Option<&HomSpace> {
        self.spaces.get(&d)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.spaces.iter().map(|(d, s)| (*d, s.dim())).collect()
    }

    pub fn differential(&self, d: i64, f: &SparseMatrix) -> SparseMatrix {
        hom_differential(&self.source, &self.target, d, f)
    }

    /// The window as a linear complex; the last degree's differential is only
    /// present when its target degree is in the window.
    pub fn complex(&self) -> Result<Complex> {
        let field = self.source.field();
        let mut basis = Vec::new();
        let mut offset = BTreeMap::new();
        for (d, s) in &self.spaces {
            offset.insert(*d, basis.len());
            for k in 0..s.dim() {
                basis.push((format!("h{d}_{k}"), *d));
            }
        }
        let mut diff = Vec::with_capacity(basis.len());
        for (d, s) in &self.spaces {
            for k in 0..s.dim() {
                match self.spaces.get(&(d + 1)) {
                    Some(t) => {
                        let df = self.differential(*d, &s.element(k));
                        let c = t
                            .coords(&df)
                            .ok_or_else(|| precondition("differential leaves the hom space"))?;
                        let off = offset[&(d + 1)];
                        diff.push(c.into_iter().map(|(i, x)| (i + off, x)).collect());
                    }
                    None => diff.push(Vec::new()),
                }
            }
        }
        Ok(Complex::new(GradedSpace { field, basis }, diff)?)
    }

    /// `dim H^n`, computed from the degrees `n-1..=n+1`.
    pub fn cohomology_dim(&self, n: i64) -> Result<usize> {
        let w = HomComplex {
            source: self.source.clone(),
            target: self.target.clone(),
            spaces: (n - 1..=n + 1).filter_map(|d| self.spaces.get(&d).map(|s| (d, s.clone()))).collect(),
        };
        Ok(w.complex()?.cohomology(n).0)
    }
}

pub fn degree_range(m: &DgBimodule, n: &DgBimodule) -> (i64, i64) {
    let dm = m.space().degrees();
    let dn = n.space().degrees();
    match (dm.first(), dm.last(), dn.first(), dn.last()) {
        (Some(&m0), Some(&m1), Some(&n0), Some(&n1)) => (n0 - m1, n1 - m0),
        _ => (0, -1),
    }
}

/// The Hom complex `Hom_{A-B}(M, N)`.
pub fn hom_complex(m: &Arc<DgBimodule>, n: &Arc<DgBimodule>) -> Result<HomComplex> {
    HomComplex::new(m.clone(), n.clone())
}
