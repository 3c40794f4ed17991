use std::sync::Arc;

use super::{hcomp, is_dg_map, then_vec, tuple_vec, AlgebraOneMorphism, ModuleOneMorphism};
use crate::dgbimod::{degree_range, multi_tensor, tensor_over_k, BimoduleMap, DgBimodule, HomSpace, Realized};
use crate::error::{mismatch, precondition, Result};
use crate::linalg::sparse::{axpy, Echelon};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::report::AlgebraReport;

/// `[x, y] = y ⊗_k x*` for left modules `x` over `A_i` and `y` over `A_j`,
/// realized as `Hom_k(x, y)`, with the evaluation `ev: [x, y] ∘ x → y`,
/// `y ⊗ φ ⊗ x' ↦ φ(x') y`.
///
/// The basis element `y_a ⊗ x_b*` has index `a · dim x + b`.
#[derive(Clone, Debug)]
pub struct InternalHom {
    pub source: Arc<DgBimodule>,
    pub target: Arc<DgBimodule>,
    pub hom: Arc<DgBimodule>,
    pub ev_source: Realized,
    pub ev: SparseMatrix,
    /// `(generator, degree, dimension)` for each verified hom space.
    pub verified: Vec<(String, i64, usize)>,
}

/// Builds `[x, y]` and checks `Hom(G, [x, y]) ≅ Hom(G ∘ x, y)` degree by
/// degree for every probe generator `G`.
pub fn internal_hom(x: &Arc<DgBimodule>, y: &Arc<DgBimodule>, probes: &[Arc<DgBimodule>]) -> Result<InternalHom> {
    if !x.right_algebra().is_ground_field() || !y.right_algebra().is_ground_field() {
        return Err(mismatch("internal homs are taken between left modules"));
    }
    let hom = Arc::new(tensor_over_k(y, &x.dual())?);
    let ev_source = multi_tensor(&[hom.clone(), x.clone()])?;
    let nx = x.dim();
    let field = x.field();
    let cols = (0..ev_source.module.dim())
        .map(|s| {
            let t = ev_source.tuple(s);
            let (a, b) = (t[0] / nx, t[0] % nx);
            if b == t[1] {
                vec![(a, field.one())]
            } else {
                Vec::new()
            }
        })
        .collect();
    let ev = SparseMatrix::from_columns(y.dim(), field, cols);
    if !is_dg_map(&ev_source.module, y, 0, &ev) {
        return Err(precondition("evaluation is not a closed bimodule map"));
    }
    let mut ih = InternalHom { source: x.clone(), target: y.clone(), hom, ev_source, ev, verified: Vec::new() };
    for g in probes {
        let r = ih.verify_generator(g)?;
        if !r.passed {
            return Err(precondition(format!("representability fails at generator {}: {r}", describe(g))));
        }
    }
    Ok(ih)
}

fn describe(g: &DgBimodule) -> String {
    format!("{}–{} bimodule of dimension {}", g.left_algebra().name(), g.right_algebra().name(), g.dim())
}

impl InternalHom {
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.source.dim() + b
    }

    /// `ev(α ⊗ v)` for a basis element `α` of `[x, y]` and a vector `v` of `x`.
    pub fn evaluate(&self, alpha: usize, v: &SparseVec) -> SparseVec {
        self.ev.apply(&then_vec(&self.ev_source, alpha, v))
    }

    /// The linear map `x → y` by which an element of `[x, y]` acts.
    pub fn action_matrix(&self, v: &SparseVec) -> SparseMatrix {
        let cols = (0..self.source.dim())
            .map(|c| {
                let mut out = Vec::new();
                for (alpha, s) in v {
                    out = axpy(&out, s, &self.evaluate(*alpha, &self.source.basis_vec(c)));
                }
                out
            })
            .collect();
        SparseMatrix::from_columns(self.target.dim(), self.source.field(), cols)
    }

    /// `Φ(g) = ev∘(g ∘₀ id_x)` for `g: G → [x, y]`, where `gx` realizes `G ∘ x`.
    pub fn adjunct(&self, gx: &Realized, g: &SparseMatrix) -> SparseMatrix {
        let id = SparseMatrix::identity(self.source.dim(), self.source.field());
        &self.ev * &hcomp(gx, &self.ev_source, g, &id, 0)
    }

    /// `Φ⁻¹(f)` given `f` on the elements `g ⊗ x_b`: `g ↦ Σ_b f(g ⊗ x_b) ⊗ x_b*`.
    pub fn transpose_with(&self, g_dim: usize, f_at: impl Fn(usize, usize) -> SparseVec) -> SparseMatrix {
        let field = self.source.field();
        let cols = (0..g_dim)
            .map(|g| {
                let mut col = Vec::new();
                for b in 0..self.source.dim() {
                    for (a, c) in f_at(g, b) {
                        col.push((self.index(a, b), c));
                    }
                }
                crate::linalg::sparse::collect_terms(col)
            })
            .collect();
        SparseMatrix::from_columns(self.hom.dim(), field, cols)
    }

    /// `Φ⁻¹(f)` for `f: G ∘ x → y`.
    pub fn transpose(&self, gx: &Realized, f: &SparseMatrix) -> SparseMatrix {
        self.transpose_with(gx.factors[0].dim(), |g, b| f.apply(&tuple_vec(gx, &[g, b])))
    }

    /// Checks that `Φ` is an isomorphism `Hom(G, [x, y]) → Hom(G ∘ x, y)`
    /// in every degree, with `Φ⁻¹` its inverse on bases.
    pub fn verify_generator(&mut self, g: &Arc<DgBimodule>) -> Result<AlgebraReport> {
        let gx = multi_tensor(&[g.clone(), self.source.clone()])?;
        let mut r = AlgebraReport::new();
        let (a0, a1) = degree_range(g, &self.hom);
        let (b0, b1) = degree_range(&gx.module, &self.target);
        let field = self.source.field();
        for d in a0.min(b0)..=a1.max(b1) {
            let left = HomSpace::new(g, &self.hom, d)?;
            let right = HomSpace::new(&gx.module, &self.target, d)?;
            if left.dim() != right.dim() {
                r.fail("hom spaces have equal dimension", vec![format!("degree {d}: {} vs {}", left.dim(), right.dim())]);
                continue;
            }
            let mut image = Echelon::new(right.dim(), field);
            for (k, h) in left.elements().iter().enumerate() {
                let f = self.adjunct(&gx, h);
                match right.coords(&f) {
                    Some(c) => {
                        if !image.insert(c) {
                            r.fail("Φ is injective", vec![format!("degree {d}, basis {k}")]);
                        }
                    }
                    None => r.fail("Φ lands in bimodule maps", vec![format!("degree {d}, basis {k}")]),
                }
                if &self.transpose(&gx, &f) != h {
                    r.fail("Φ⁻¹∘Φ = id", vec![format!("degree {d}, basis {k}")]);
                }
            }
            if left.dim() > 0 {
                self.verified.push((describe(g), d, left.dim()));
            }
        }
        Ok(r)
    }

    /// `A_x = [x, x]` with unit the adjunct of `𝟙 ∘ x ≅ x` and multiplication
    /// the adjunct of `ev∘(id ∘₀ ev)`.
    pub fn end_algebra(&self) -> Result<AlgebraOneMorphism> {
        if self.source != self.target {
            return Err(precondition("endomorphism algebra of [x, y] with x ≠ y"));
        }
        let x = &self.source;
        let base = x.left_algebra();
        let unit = self.transpose_with(base.dim(), |r, b| x.left_action(r).col(b).clone());
        let square = multi_tensor(&[self.hom.clone(), self.hom.clone()])?;
        let twice = |g: usize, b: usize| -> SparseVec {
            let t = square.tuple(g);
            let inner = self.evaluate(t[1], &x.basis_vec(b));
            self.evaluate(t[0], &inner)
        };
        let mult = self.transpose_with(square.module.dim(), twice);
        // the adjunct of the result must give back the composite
        let ev_sq = multi_tensor(&[square.module.clone(), x.clone()])?;
        let back = self.adjunct(&ev_sq, &mult);
        for s in 0..ev_sq.module.dim() {
            let t = ev_sq.tuple(s);
            if back.col(s) != &twice(t[0], t[1]) {
                return Err(precondition("multiplication does not transport back to ev∘(id ∘₀ ev)"));
            }
        }
        AlgebraOneMorphism::with_square(self.hom.clone(), unit, mult, square)
    }

    /// The right `A_x`-module structure on `[x, y]`, the adjunct of
    /// `ev_{x,y}∘(id ∘₀ ev_{x,x})`.
    pub fn module_over(&self, end: &InternalHom, a_x: Arc<AlgebraOneMorphism>) -> Result<ModuleOneMorphism> {
        if end.source != self.source || a_x.carrier != end.hom {
            return Err(mismatch("module structure over a different endomorphism algebra"));
        }
        let x = &self.source;
        let action = multi_tensor(&[self.hom.clone(), a_x.carrier.clone()])?;
        let rho = self.transpose_with(action.module.dim(), |s, b| {
            let t = action.tuple(s);
            let inner = end.evaluate(t[1], &x.basis_vec(b));
            self.evaluate(t[0], &inner)
        });
        let m = ModuleOneMorphism::new(a_x, self.hom.clone(), rho)?;
        Ok(m)
    }

    /// The comparison `G ∘ [x, y] → [x, G ∘ y]`, the adjunct of
    /// `id_G ∘₀ ev`, together with its inverse. Fails unless it is a closed
    /// degree-0 bimodule isomorphism.
    pub fn action_iso(&self, g: &Arc<DgBimodule>) -> Result<(BimoduleMap, SparseMatrix)> {
        let gy = multi_tensor(&[g.clone(), self.target.clone()])?;
        let outer = internal_hom(&self.source, &gy.module, &[])?;
        let ghom = multi_tensor(&[g.clone(), self.hom.clone()])?;
        let theta = outer.transpose_with(ghom.module.dim(), |s, b| {
            let t = ghom.tuple(s);
            let v = self.evaluate(t[1], &self.source.basis_vec(b));
            let mut out = Vec::new();
            for (k, c) in v {
                out = axpy(&out, &c, &tuple_vec(&gy, &[t[0], k]));
            }
            out
        });
        if !is_dg_map(&ghom.module, &outer.hom, 0, &theta) {
            return Err(precondition("comparison map is not a closed bimodule map"));
        }
        let inv = theta.inverse().ok_or_else(|| precondition("comparison map is not invertible"))?;
        Ok((BimoduleMap::new(ghom.module.clone(), outer.hom.clone(), 0, theta), inv))
    }
}

/// `A_x = [x, x]` as an algebra 1-morphism, computed through the adjunction.
pub fn internal_end_algebra(x: &Arc<DgBimodule>, probes: &[Arc<DgBimodule>]) -> Result<AlgebraOneMorphism> {
    internal_hom(x, x, probes)?.end_algebra()
}
