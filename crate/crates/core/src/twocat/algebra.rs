use std::collections::HashMap;
use std::sync::Arc;

use super::{compatible_tuples, hcomp, is_dg_map, label_tuple, same, then_vec, tuple_vec, vec_then, TwoCategoryCA};
use crate::dgalg::DgAlgebra;
use crate::dgbimod::{cokernel, degree_range, multi_tensor, BimoduleMap, DgBimodule, HomSpace, Realized};
use crate::error::{mismatch, precondition, Result};
use crate::linalg::sparse::{axpy, kernel_of_columns};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::report::AlgebraReport;

/// An algebra object `A` in `C(i, i)`: a bimodule with a unit `u: 𝟙_i → A`
/// and a multiplication `m: A ∘ A → A`, both closed of degree 0.
#[derive(Clone, Debug)]
pub struct AlgebraOneMorphism {
    /// `𝟙_i`, the regular bimodule of the base algebra.
    pub base: Arc<DgBimodule>,
    pub carrier: Arc<DgBimodule>,
    pub unit: SparseMatrix,
    pub mult: SparseMatrix,
    /// `A ∘ A`, the source of `mult`.
    pub square: Realized,
}

impl AlgebraOneMorphism {
    /// Assembles the data; the axioms are checked by [`AlgebraOneMorphism::check`].
    pub fn new(carrier: Arc<DgBimodule>, unit: SparseMatrix, mult: SparseMatrix) -> Result<Self> {
        if !same(carrier.left_algebra(), carrier.right_algebra()) {
            return Err(mismatch("an algebra 1-morphism must be an endo-1-morphism"));
        }
        let square = multi_tensor(&[carrier.clone(), carrier.clone()])?;
        Self::with_square(carrier, unit, mult, square)
    }

    pub(crate) fn with_square(carrier: Arc<DgBimodule>, unit: SparseMatrix, mult: SparseMatrix, square: Realized) -> Result<Self> {
        let base = Arc::new(DgBimodule::regular(carrier.left_algebra().clone()));
        if unit.nrows() != carrier.dim() || unit.ncols() != base.dim() {
            return Err(precondition("unit has the wrong shape"));
        }
        if mult.nrows() != carrier.dim() || mult.ncols() != square.module.dim() {
            return Err(precondition("multiplication has the wrong shape"));
        }
        Ok(AlgebraOneMorphism { base, carrier, unit, mult, square })
    }

    /// `𝟙_i` with its canonical structure.
    pub fn trivial(a: Arc<DgAlgebra>) -> Result<Self> {
        let carrier = Arc::new(DgBimodule::regular(a.clone()));
        let square = multi_tensor(&[carrier.clone(), carrier.clone()])?;
        let cols = (0..square.module.dim())
            .map(|q| {
                let t = square.tuple(q);
                a.mul_basis(t[0], t[1]).clone()
            })
            .collect();
        let mult = SparseMatrix::from_columns(a.dim(), a.field(), cols);
        Self::new(carrier.clone(), SparseMatrix::identity(a.dim(), a.field()), mult)
    }

    /// A dg algebra as an algebra 1-morphism in `C_k`.
    pub fn from_dg_algebra(a: &DgAlgebra) -> Result<Self> {
        let field = a.field();
        let k = Arc::new(DgAlgebra::ground_field(field));
        let n = a.dim();
        let left = (0..n).map(|m| (0, m, m, field.one())).collect();
        let right = (0..n).map(|m| (m, 0, m, field.one())).collect();
        let diff = (0..n).flat_map(|i| a.diff_basis(i).iter().map(move |(j, c)| (i, *j, c.clone()))).collect();
        let carrier = Arc::new(DgBimodule::new(k.clone(), k, a.space().clone(), left, right, diff)?);
        let square = multi_tensor(&[carrier.clone(), carrier.clone()])?;
        let cols = (0..square.module.dim())
            .map(|q| {
                let t = square.tuple(q);
                a.mul_basis(t[0], t[1]).clone()
            })
            .collect();
        let mult = SparseMatrix::from_columns(n, field, cols);
        let unit = SparseMatrix::from_columns(n, field, vec![a.unit().clone()]);
        Self::new(carrier, unit, mult)
    }

    /// Over the ground field an algebra 1-morphism is a dg algebra.
    pub fn to_dg_algebra(&self, name: &str) -> Result<DgAlgebra> {
        if !self.base.left_algebra().is_ground_field() {
            return Err(precondition("only algebra 1-morphisms of C_k are dg algebras"));
        }
        let c = &self.carrier;
        let n = c.dim();
        let mut mult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, x) in self.mul(&c.basis_vec(i), &c.basis_vec(j)) {
                    mult.push((i, j, k, x));
                }
            }
        }
        let diff = (0..n).flat_map(|i| c.diff().col(i).iter().map(move |(j, x)| (i, *j, x.clone()))).collect();
        DgAlgebra::new(name, c.space().clone(), self.unit_element(), mult, diff)
    }

    pub fn base_algebra(&self) -> &Arc<DgAlgebra> {
        self.carrier.left_algebra()
    }

    /// `m(a ⊗ b)`.
    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                terms.push((vec![*i, *j], x * y));
            }
        }
        self.mult.apply(&self.square.project(terms))
    }

    /// `u(1)`.
    pub fn unit_element(&self) -> SparseVec {
        self.unit.apply(self.base_algebra().unit())
    }

    /// Exact check of closedness, associativity and both unit laws.
    pub fn check(&self) -> AlgebraReport {
        let mut r = self.carrier.check();
        let c = &*self.carrier;
        if !is_dg_map(&self.base, c, 0, &self.unit) {
            r.fail("unit is a closed degree-0 bimodule map", vec![]);
        }
        if !is_dg_map(&self.square.module, c, 0, &self.mult) {
            r.fail("multiplication is a closed degree-0 bimodule map", vec![]);
        }
        if !r.passed {
            return r;
        }
        let m_pair = |a: usize, b: usize| self.mult.apply(&tuple_vec(&self.square, &[a, b]));
        for t in compatible_tuples(&[c, c, c]) {
            let lhs = self.mult.apply(&vec_then(&self.square, &m_pair(t[0], t[1]), t[2]));
            let rhs = self.mult.apply(&then_vec(&self.square, t[0], &m_pair(t[1], t[2])));
            if lhs != rhs {
                r.fail("associativity m(m ⊗ 1) = m(1 ⊗ m)", vec![label_tuple(&[c, c, c], &t)]);
                break;
            }
        }
        let base = &*self.base;
        for t in compatible_tuples(&[base, c]) {
            let u = self.unit.col(t[0]);
            let lhs = self.mult.apply(&vec_then(&self.square, u, t[1]));
            if &lhs != c.left_action(t[0]).col(t[1]) {
                r.fail("left unit m(u ⊗ 1) = λ", vec![label_tuple(&[base, c], &t)]);
                break;
            }
        }
        for t in compatible_tuples(&[c, base]) {
            let u = self.unit.col(t[1]);
            let lhs = self.mult.apply(&then_vec(&self.square, t[0], u));
            if &lhs != c.right_action(t[1]).col(t[0]) {
                r.fail("right unit m(1 ⊗ u) = ρ", vec![label_tuple(&[c, base], &t)]);
                break;
            }
        }
        r
    }
}

/// A closed degree-0 map of algebra 1-morphisms.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub source: Arc<AlgebraOneMorphism>,
    pub target: Arc<AlgebraOneMorphism>,
    pub matrix: SparseMatrix,
}

impl AlgebraMap {
    pub fn identity(a: Arc<AlgebraOneMorphism>) -> Self {
        let id = SparseMatrix::identity(a.carrier.dim(), a.carrier.field());
        AlgebraMap { source: a.clone(), target: a, matrix: id }
    }

    /// Closedness, compatibility with units and with multiplications.
    pub fn check(&self) -> AlgebraReport {
        let mut r = AlgebraReport::new();
        let (a, b) = (&self.source, &self.target);
        if !same(a.base_algebra(), b.base_algebra()) {
            r.fail("same base object", vec![]);
            return r;
        }
        if !is_dg_map(&a.carrier, &b.carrier, 0, &self.matrix) {
            r.fail("closed degree-0 bimodule map", vec![]);
            return r;
        }
        if &self.matrix * &a.unit != b.unit {
            r.fail("α∘u_A = u_B", vec![]);
        }
        let c = &*a.carrier;
        for t in compatible_tuples(&[c, c]) {
            let lhs = self.matrix.apply(&a.mult.apply(&tuple_vec(&a.square, &t)));
            let rhs = b.mul(self.matrix.col(t[0]), self.matrix.col(t[1]));
            if lhs != rhs {
                r.fail("α∘m_A = m_B∘(α∘₀α)", vec![label_tuple(&[c, c], &t)]);
                break;
            }
        }
        r
    }
}

/// A right module `Y` over an algebra 1-morphism `A`, with action `ρ: Y ∘ A → Y`.
#[derive(Clone, Debug)]
pub struct ModuleOneMorphism {
    pub algebra: Arc<AlgebraOneMorphism>,
    pub carrier: Arc<DgBimodule>,
    pub rho: SparseMatrix,
    /// `Y ∘ A`, the source of `rho`.
    pub action: Realized,
    /// For a free module `G ∘ A`, the realized product it was built from.
    pub free_on: Option<Realized>,
}

impl ModuleOneMorphism {
    pub fn new(algebra: Arc<AlgebraOneMorphism>, carrier: Arc<DgBimodule>, rho: SparseMatrix) -> Result<Self> {
        let action = multi_tensor(&[carrier.clone(), algebra.carrier.clone()])?;
        if rho.nrows() != carrier.dim() || rho.ncols() != action.module.dim() {
            return Err(precondition("action has the wrong shape"));
        }
        Ok(ModuleOneMorphism { algebra, carrier, rho, action, free_on: None })
    }

    /// `A` over itself.
    pub fn regular(algebra: Arc<AlgebraOneMorphism>) -> Self {
        ModuleOneMorphism {
            carrier: algebra.carrier.clone(),
            rho: algebra.mult.clone(),
            action: algebra.square.clone(),
            free_on: None,
            algebra,
        }
    }

    /// The free module `G ∘ A` with action `id_G ∘₀ m`.
    pub fn free(g: &Arc<DgBimodule>, algebra: Arc<AlgebraOneMorphism>) -> Result<Self> {
        let ga = multi_tensor(&[g.clone(), algebra.carrier.clone()])?;
        let action = multi_tensor(&[ga.module.clone(), algebra.carrier.clone()])?;
        let cols = (0..action.module.dim())
            .map(|s| {
                let t = action.tuple(s);
                let inner = ga.tuple(t[0]);
                let ab = algebra.mult.apply(&tuple_vec(&algebra.square, &[inner[1], t[1]]));
                then_vec(&ga, inner[0], &ab)
            })
            .collect();
        let rho = SparseMatrix::from_columns(ga.module.dim(), g.field(), cols);
        Ok(ModuleOneMorphism { algebra, carrier: ga.module.clone(), rho, action, free_on: Some(ga) })
    }

    /// `ρ(y ⊗ a)`.
    pub fn act(&self, y: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, x) in y {
            for (j, z) in a {
                terms.push((vec![*i, *j], x * z));
            }
        }
        self.rho.apply(&self.action.project(terms))
    }

    /// Exact check of the module axioms.
    pub fn check(&self) -> AlgebraReport {
        let mut r = self.carrier.check();
        let a = &self.algebra;
        if !is_dg_map(&self.action.module, &self.carrier, 0, &self.rho) {
            r.fail("action is a closed degree-0 bimodule map", vec![]);
            return r;
        }
        let (y, c) = (&*self.carrier, &*a.carrier);
        for t in compatible_tuples(&[y, c, c]) {
            let ya = self.rho.apply(&tuple_vec(&self.action, &[t[0], t[1]]));
            let lhs = self.rho.apply(&vec_then(&self.action, &ya, t[2]));
            let ab = a.mult.apply(&tuple_vec(&a.square, &[t[1], t[2]]));
            let rhs = self.rho.apply(&then_vec(&self.action, t[0], &ab));
            if lhs != rhs {
                r.fail("ρ(ρ ⊗ 1) = ρ(1 ⊗ m)", vec![label_tuple(&[y, c, c], &t)]);
                break;
            }
        }
        let base = &*a.base;
        for t in compatible_tuples(&[y, base]) {
            let lhs = self.rho.apply(&then_vec(&self.action, t[0], a.unit.col(t[1])));
            if &lhs != y.right_action(t[1]).col(t[0]) {
                r.fail("ρ(1 ⊗ u) = id", vec![label_tuple(&[y, base], &t)]);
                break;
            }
        }
        r
    }

    /// `Y⟨k⟩` with the same action matrix; the shift sits on the left, so the
    /// action commutes with it without sign.
    pub fn shift(&self, k: i64) -> Result<Self> {
        let carrier = Arc::new(self.carrier.shift(k));
        let action = multi_tensor(&[carrier.clone(), self.algebra.carrier.clone()])?;
        let cols = (0..action.module.dim()).map(|s| self.rho.apply(&tuple_vec(&self.action, action.tuple(s)))).collect();
        let rho = SparseMatrix::from_columns(carrier.dim(), carrier.field(), cols);
        Ok(ModuleOneMorphism { algebra: self.algebra.clone(), carrier, rho, action, free_on: None })
    }

    /// `Cone(f) = Y ⊕ X⟨1⟩` for a closed degree-0 module map `f: X → Y`, with
    /// the action assembled blockwise.
    pub fn cone(x: &ModuleOneMorphism, y: &ModuleOneMorphism, f: &SparseMatrix) -> Result<Self> {
        if !same_algebra_object(&x.algebra, &y.algebra) {
            return Err(mismatch("modules over different algebra 1-morphisms"));
        }
        if !is_module_map(x, y, 0, f) || !crate::dgbimod::hom_differential(&x.carrier, &y.carrier, 0, f).is_zero() {
            return Err(precondition("cone needs a closed degree-0 module map"));
        }
        let (ny, nx) = (y.carrier.dim(), x.carrier.dim());
        let field = y.carrier.field();
        let sum = DgBimodule::direct_sum(
            &[(&y.carrier, 0), (&x.carrier, 1)],
            y.carrier.left_algebra().clone(),
            y.carrier.right_algebra().clone(),
        )?;
        let mut diff = sum.diff().clone();
        diff.add_block(0, ny, &-field.one(), f);
        let carrier = Arc::new(DgBimodule::from_parts(
            sum.left_algebra().clone(),
            sum.right_algebra().clone(),
            sum.space().clone(),
            (0..sum.left_algebra().dim()).map(|a| sum.left_action(a).clone()).collect(),
            (0..sum.right_algebra().dim()).map(|b| sum.right_action(b).clone()).collect(),
            diff,
        )?);
        let action = multi_tensor(&[carrier.clone(), y.algebra.carrier.clone()])?;
        let cols = (0..action.module.dim())
            .map(|s| {
                let t = action.tuple(s);
                if t[0] < ny {
                    y.rho.apply(&tuple_vec(&y.action, &[t[0], t[1]]))
                } else {
                    let v = x.rho.apply(&tuple_vec(&x.action, &[t[0] - ny, t[1]]));
                    v.into_iter().map(|(i, c)| (i + ny, c)).collect()
                }
            })
            .collect();
        let rho = SparseMatrix::from_columns(ny + nx, field, cols);
        Ok(ModuleOneMorphism { algebra: y.algebra.clone(), carrier, rho, action, free_on: None })
    }
}

fn same_algebra_object(a: &Arc<AlgebraOneMorphism>, b: &Arc<AlgebraOneMorphism>) -> bool {
    Arc::ptr_eq(a, b) || (a.carrier == b.carrier && a.mult == b.mult && a.unit == b.unit)
}

/// Whether `f: X → Y` is a degree-`d` bimodule map commuting with the actions.
pub fn is_module_map(x: &ModuleOneMorphism, y: &ModuleOneMorphism, d: i64, f: &SparseMatrix) -> bool {
    if f.nrows() != y.carrier.dim() || f.ncols() != x.carrier.dim() {
        return false;
    }
    if !crate::dgbimod::is_bimodule_map(&x.carrier, &y.carrier, d, f) {
        return false;
    }
    module_defect(x, y, f).is_zero()
}

/// `f∘ρ_X - ρ_Y∘(f ∘₀ id_A)`.
fn module_defect(x: &ModuleOneMorphism, y: &ModuleOneMorphism, f: &SparseMatrix) -> SparseMatrix {
    let id = SparseMatrix::identity(x.algebra.carrier.dim(), f.field());
    &(f * &x.rho) - &(&y.rho * &hcomp(&x.action, &y.action, f, &id, 0))
}

/// A basis of the degree-`d` module maps `X → Y`.
pub fn module_maps(x: &ModuleOneMorphism, y: &ModuleOneMorphism, d: i64) -> Result<Vec<SparseMatrix>> {
    let hs = HomSpace::new(&x.carrier, &y.carrier, d)?;
    let elems = hs.elements();
    let cols: Vec<SparseVec> = elems.iter().map(|f| module_defect(x, y, f).flatten()).collect();
    let rows = y.carrier.dim() * x.action.module.dim();
    Ok(kernel_of_columns(&cols, rows, x.carrier.field())
        .iter()
        .map(|c| {
            let mut m = SparseMatrix::zero(y.carrier.dim(), x.carrier.dim(), x.carrier.field());
            for (k, s) in c {
                m = &m + &elems[*k].scaled(s);
            }
            m
        })
        .collect())
}

/// The isomorphism `Hom_{mod-A}(G ∘ A, Y) ≅ Hom(G, Y)`, verified on bases in
/// every degree.
#[derive(Clone, Debug)]
pub struct Adjunction {
    pub generator: Arc<DgBimodule>,
    pub free: ModuleOneMorphism,
    pub target: ModuleOneMorphism,
    /// `id_G ∘₀ u: G → G ∘ A`.
    pub unit_map: SparseMatrix,
    /// `(degree, dimension)` of both sides.
    pub degrees: Vec<(i64, usize)>,
    pub report: AlgebraReport,
}

impl Adjunction {
    /// `f ↦ f∘(id_G ∘₀ u)`.
    pub fn forward(&self, f: &SparseMatrix) -> SparseMatrix {
        f * &self.unit_map
    }

    /// `g ↦ ρ_Y∘(g ∘₀ id_A)`.
    pub fn backward(&self, g: &SparseMatrix) -> SparseMatrix {
        let ga = self.free.free_on.as_ref().expect("free module");
        let id = SparseMatrix::identity(self.free.algebra.carrier.dim(), g.field());
        &self.target.rho * &hcomp(ga, &self.target.action, g, &id, 0)
    }
}

pub fn free_module_adjunction(g: &Arc<DgBimodule>, y: &ModuleOneMorphism) -> Result<Adjunction> {
    let a = y.algebra.clone();
    let free = ModuleOneMorphism::free(g, a.clone())?;
    let ga = free.free_on.clone().expect("free module");
    let u1 = a.unit_element();
    let cols = (0..g.dim()).map(|g| then_vec(&ga, g, &u1)).collect();
    let unit_map = SparseMatrix::from_columns(ga.module.dim(), g.field(), cols);
    let mut adj = Adjunction {
        generator: g.clone(),
        free,
        target: y.clone(),
        unit_map,
        degrees: Vec::new(),
        report: AlgebraReport::new(),
    };
    let (l0, l1) = degree_range(&adj.free.carrier, &y.carrier);
    let (r0, r1) = degree_range(g, &y.carrier);
    for d in l0.min(r0)..=l1.max(r1) {
        let left = module_maps(&adj.free, y, d)?;
        let right = HomSpace::new(g, &y.carrier, d)?;
        if left.len() != right.dim() {
            adj.report.fail("both sides have equal dimension", vec![format!("degree {d}: {} vs {}", left.len(), right.dim())]);
        }
        for (k, f) in left.iter().enumerate() {
            let there = adj.forward(f);
            if right.coords(&there).is_none() {
                adj.report.fail("forward map lands in Hom(G, Y)", vec![format!("degree {d}, basis {k}")]);
            }
            if &adj.backward(&there) != f {
                adj.report.fail("backward∘forward = id", vec![format!("degree {d}, basis {k}")]);
            }
        }
        for (k, h) in right.elements().iter().enumerate() {
            let back = adj.backward(h);
            if !is_module_map(&adj.free, y, d, &back) {
                adj.report.fail("backward map is a module map", vec![format!("degree {d}, basis {k}")]);
            }
            if &adj.forward(&back) != h {
                adj.report.fail("forward∘backward = id", vec![format!("degree {d}, basis {k}")]);
            }
        }
        if !left.is_empty() || right.dim() > 0 {
            adj.degrees.push((d, right.dim()));
        }
    }
    Ok(adj)
}

/// The free modules `G ∘ A` over the generators `G` of `C(i, j)`; shifts,
/// cones and summands are taken from these on demand.
pub fn module_category_objects(
    cat: &TwoCategoryCA,
    a: &Arc<AlgebraOneMorphism>,
    j: usize,
) -> Result<Vec<ModuleOneMorphism>> {
    let i = cat.object_of(a.base_algebra()).ok_or_else(|| mismatch("algebra is not over an object of C_A"))?;
    cat.probe_generators(i, j)?.iter().map(|g| ModuleOneMorphism::free(g, a.clone())).collect()
}

/// `Φ^α(M) = M ∘_A B`, the cokernel of `ρ_M ∘₀ id - id ∘₀ λ_B` on
/// `M ∘ A ∘ B → M ∘ B`, where `B` is a left `A`-module through `α`.
pub fn pushforward_algebra_map(alpha: &AlgebraMap, m: &ModuleOneMorphism) -> Result<ModuleOneMorphism> {
    let report = alpha.check();
    if !report.passed {
        return Err(precondition(format!("not an algebra map: {report}")));
    }
    if !same_algebra_object(&m.algebra, &alpha.source) {
        return Err(mismatch("module is not over the source of the algebra map"));
    }
    let (a, b) = (&alpha.source, &alpha.target);
    let field = m.carrier.field();
    let mab = multi_tensor(&[m.carrier.clone(), a.carrier.clone(), b.carrier.clone()])?;
    let mb = multi_tensor(&[m.carrier.clone(), b.carrier.clone()])?;
    let delta_cols = (0..mab.module.dim())
        .map(|s| {
            let t = mab.tuple(s);
            let ma = m.rho.apply(&tuple_vec(&m.action, &[t[0], t[1]]));
            let left = vec_then(&mb, &ma, t[2]);
            let ab = b.mul(alpha.matrix.col(t[1]), &b.carrier.basis_vec(t[2]));
            let right = then_vec(&mb, t[0], &ab);
            axpy(&left, &-field.one(), &right)
        })
        .collect();
    let delta = SparseMatrix::from_columns(mb.module.dim(), field, delta_cols);
    let (q, pi) = cokernel(&BimoduleMap::new(mab.module.clone(), mb.module.clone(), 0, delta))?;
    let mut lift: HashMap<usize, usize> = HashMap::new();
    for i in 0..mb.module.dim() {
        if let [(k, c)] = pi.matrix.col(i).as_slice() {
            if c.is_one() {
                lift.entry(*k).or_insert(i);
            }
        }
    }
    let qb = multi_tensor(&[q.clone(), b.carrier.clone()])?;
    let act_mb = |i: usize, x: &SparseVec| -> SparseVec {
        // (μ ⊗ b') · x = μ ⊗ m_B(b' ⊗ x)
        let t = mb.tuple(i);
        then_vec(&mb, t[0], &b.mul(&b.carrier.basis_vec(t[1]), x))
    };
    let mut cols = Vec::with_capacity(qb.module.dim());
    for s in 0..qb.module.dim() {
        let t = qb.tuple(s);
        let i = *lift.get(&t[0]).ok_or_else(|| precondition("cokernel basis without a lift"))?;
        cols.push(pi.matrix.apply(&act_mb(i, &b.carrier.basis_vec(t[1]))));
    }
    let rho = SparseMatrix::from_columns(q.dim(), field, cols);
    let out = ModuleOneMorphism { algebra: b.clone(), carrier: q.clone(), rho, action: qb, free_on: None };
    // the action on the cokernel must be induced by the one on M ∘ B
    let (mc, bc) = (&*m.carrier, &*b.carrier);
    for t in compatible_tuples(&[mc, bc, bc]) {
        let i_vec = tuple_vec(&mb, &[t[0], t[1]]);
        let mut acted = Vec::new();
        for (i, c) in &i_vec {
            acted = axpy(&acted, c, &act_mb(*i, &bc.basis_vec(t[2])));
        }
        let lhs = pi.matrix.apply(&acted);
        let rhs = out.act(&pi.matrix.apply(&i_vec), &bc.basis_vec(t[2]));
        if lhs != rhs {
            return Err(precondition(format!("action does not descend at {}", label_tuple(&[mc, bc, bc], &t))));
        }
    }
    Ok(out)
}

