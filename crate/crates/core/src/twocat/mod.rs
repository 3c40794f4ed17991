//! The dg 2-category `C_A` of bimodules over a product of dg algebras, its
//! natural 2-representation, algebra and module 1-morphisms, internal homs,
//! Morita checks and dg ideal probes.
//!
//! A 1-morphism `i → j` is an `A_j`–`A_i`-bimodule, composition is the tensor
//! product over the middle algebra and 2-morphisms are bimodule maps. Objects
//! of the natural 2-representation at `i` are left `A_i`-modules, stored as
//! `A_i`–`k`-bimodules.

mod algebra;
mod ideal;
mod inthom;
mod morita;

use std::sync::Arc;

use crate::dgalg::DgAlgebra;
use crate::dgbimod::{multi_tensor, tensor_over_algebra, tensor_over_k, BimoduleMap, DgBimodule, Realized};
use crate::error::{mismatch, precondition, Result};
use crate::linalg::{Field, SparseMatrix, SparseVec};

pub use algebra::{
    free_module_adjunction, is_module_map, module_category_objects, module_maps, pushforward_algebra_map, Adjunction,
    AlgebraMap, AlgebraOneMorphism, ModuleOneMorphism,
};
pub use ideal::{ideal_closure, quotient_simple_probe, Ideal, IdealBudget, Morphism, ProbeOutcome, Representation};
pub use inthom::{internal_end_algebra, internal_hom, InternalHom};
pub use morita::{find_isomorphism, morita_verify, MoritaOutcome};

pub(crate) fn same(a: &Arc<DgAlgebra>, b: &Arc<DgAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `C_A` for `A = A_1 × ... × A_n`, one object per factor.
#[derive(Clone, Debug)]
pub struct TwoCategoryCA {
    factors: Vec<Arc<DgAlgebra>>,
}

impl TwoCategoryCA {
    pub fn new(factors: Vec<Arc<DgAlgebra>>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(precondition("a 2-category needs at least one object"));
        };
        if factors.iter().any(|a| a.field() != first.field()) {
            return Err(mismatch("factors over different fields"));
        }
        Ok(TwoCategoryCA { factors })
    }

    pub fn field(&self) -> Field {
        self.factors[0].field()
    }

    pub fn objects(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &Arc<DgAlgebra> {
        &self.factors[i]
    }

    /// The object whose algebra is `a`.
    pub fn object_of(&self, a: &Arc<DgAlgebra>) -> Option<usize> {
        self.factors.iter().position(|f| same(f, a))
    }

    /// `𝟙_i`, the regular bimodule.
    pub fn identity(&self, i: usize) -> Arc<DgBimodule> {
        Arc::new(DgBimodule::regular(self.factors[i].clone()))
    }

    /// `F_{j,i} = A_j ⊗_k A_i`, a 1-morphism `i → j`.
    pub fn generator(&self, j: usize, i: usize) -> Result<Arc<DgBimodule>> {
        let l = DgBimodule::left_regular(self.factors[j].clone());
        let r = DgBimodule::right_regular(self.factors[i].clone());
        Ok(Arc::new(tensor_over_k(&l, &r)?))
    }

    /// The 1-morphisms `i → j` whose thick closure is `C_A(i, j)`.
    pub fn probe_generators(&self, i: usize, j: usize) -> Result<Vec<Arc<DgBimodule>>> {
        let mut out = Vec::new();
        if i == j {
            out.push(self.identity(i));
        }
        out.push(self.generator(j, i)?);
        Ok(out)
    }

    /// `g ∘ f` for `f: i → j`, `g: j → k`.
    pub fn compose(&self, g: &Arc<DgBimodule>, f: &Arc<DgBimodule>) -> Result<Arc<DgBimodule>> {
        Ok(Arc::new(tensor_over_algebra(g, f)?))
    }

    /// `A_i` in the natural 2-representation.
    pub fn natural_object(&self, i: usize) -> Arc<DgBimodule> {
        Arc::new(DgBimodule::left_regular(self.factors[i].clone()))
    }

    /// `[x, y]` with representability checked against the generators of the
    /// relevant hom category.
    pub fn internal_hom(&self, x: &Arc<DgBimodule>, y: &Arc<DgBimodule>) -> Result<InternalHom> {
        let i = self.object_of(x.left_algebra()).ok_or_else(|| mismatch("source module is not over a factor"))?;
        let j = self.object_of(y.left_algebra()).ok_or_else(|| mismatch("target module is not over a factor"))?;
        internal_hom(x, y, &self.probe_generators(i, j)?)
    }
}

/// `Ev_x(f) = f ∘ x`, the action of a 1-morphism on a module.
pub fn evaluation(x: &Arc<DgBimodule>, f: &Arc<DgBimodule>) -> Result<Arc<DgBimodule>> {
    if !same(f.right_algebra(), x.left_algebra()) {
        return Err(mismatch("1-morphism does not act on this module"));
    }
    Ok(Arc::new(tensor_over_algebra(f, x)?))
}

/// `Ev_x` on a 2-morphism `φ: f → g`, i.e. `φ ∘₀ id_x`.
pub fn evaluation_map(x: &Arc<DgBimodule>, phi: &BimoduleMap) -> Result<BimoduleMap> {
    let src = multi_tensor(&[phi.source.clone(), x.clone()])?;
    let tgt = multi_tensor(&[phi.target.clone(), x.clone()])?;
    let id = SparseMatrix::identity(x.dim(), x.field());
    let m = hcomp(&src, &tgt, &phi.matrix, &id, 0);
    Ok(BimoduleMap::new(src.module.clone(), tgt.module.clone(), phi.degree, m))
}

/// The image of a single tuple of basis elements in a realized tensor product.
pub(crate) fn tuple_vec(r: &Realized, t: &[usize]) -> SparseVec {
    r.project(vec![(t.to_vec(), r.module.field().one())])
}

/// `v ⊗ b` for a vector `v` in the first factor and a basis element `b`.
pub(crate) fn vec_then(r: &Realized, v: &SparseVec, b: usize) -> SparseVec {
    r.project(v.iter().map(|(k, c)| (vec![*k, b], c.clone())).collect())
}

/// `a ⊗ v` for a basis element `a` and a vector `v` in the second factor.
pub(crate) fn then_vec(r: &Realized, a: usize, v: &SparseVec) -> SparseVec {
    r.project(v.iter().map(|(k, c)| (vec![a, *k], c.clone())).collect())
}

/// `f ∘₀ g` between realized two-factor tensors, with the Koszul sign
/// `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`.
pub fn hcomp(src: &Realized, tgt: &Realized, f: &SparseMatrix, g: &SparseMatrix, g_degree: i64) -> SparseMatrix {
    let field = src.module.field();
    let x_fac = &src.factors[0];
    let cols = (0..src.module.dim())
        .map(|q| {
            let t = src.tuple(q);
            let s = field.sign(g_degree * x_fac.degree(t[0]));
            let mut terms = Vec::new();
            for (k, a) in f.col(t[0]) {
                for (l, b) in g.col(t[1]) {
                    terms.push((vec![*k, *l], &s * &(a * b)));
                }
            }
            tgt.project(terms)
        })
        .collect();
    SparseMatrix::from_columns(tgt.module.dim(), field, cols)
}

/// All tuples of basis elements whose idempotent blocks match at every
/// junction; their images span the tensor product.
pub(crate) fn compatible_tuples(factors: &[&DgBimodule]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..factors[0].dim()).map(|i| vec![i]).collect();
    for t in 1..factors.len() {
        let mut next = Vec::new();
        for p in &out {
            let v = factors[t - 1].block(*p.last().unwrap()).1;
            for x in 0..factors[t].dim() {
                if factors[t].block(x).0 == v {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

pub(crate) fn label_tuple(factors: &[&DgBimodule], t: &[usize]) -> String {
    t.iter().enumerate().map(|(k, &x)| factors[k].label(x)).collect::<Vec<_>>().join("⊗")
}

/// Whether `f: m → n` is a closed bimodule map of degree `d`.
pub(crate) fn is_dg_map(m: &DgBimodule, n: &DgBimodule, d: i64, f: &SparseMatrix) -> bool {
    f.nrows() == n.dim()
        && f.ncols() == m.dim()
        && crate::dgbimod::is_bimodule_map(m, n, d, f)
        && crate::dgbimod::hom_differential(m, n, d, f).is_zero()
}
