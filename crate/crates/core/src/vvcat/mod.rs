//! Compact dg modules presented as arrows `X₁ → X₀` of twisted complexes.
//!
//! `X₁` is kept as a list of parts. Composition then distributes over the
//! parts on both sides, which makes it strictly associative even though the
//! composite of twisted complexes only distributes strictly on the left.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgbimod::{cokernel, degree_range, hom_differential, is_bimodule_map, BimoduleMap, DgBimodule, HomSpace};
use crate::error::{mismatch, precondition, Result};
use crate::linalg::sparse::{kernel_of_columns, solve_columns, Echelon};
use crate::linalg::{Complex, Field, GradedSpace, SparseMatrix, SparseVec};
use crate::twisted::{compose, hcomp_morphisms, Ambient, TwistedComplex, TwistedMorphism};

/// An object `(X₁ → X₀)`; `x[p]` is the closed degree-0 map from part `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowObject {
    pub x1: Vec<TwistedComplex>,
    pub x0: TwistedComplex,
    pub x: Vec<SparseMatrix>,
}

impl ArrowObject {
    pub fn new(amb: &Ambient, x1: Vec<TwistedComplex>, x0: TwistedComplex, x: Vec<SparseMatrix>) -> Result<Self> {
        if x1.len() != x.len() {
            return Err(mismatch("one structure map per part"));
        }
        for (p, m) in x1.iter().zip(&x) {
            let f = TwistedMorphism::new(amb, p.clone(), x0.clone(), 0, m.clone())?;
            if !f.is_morphism(amb)? || !f.is_closed(amb)? {
                return Err(precondition("structure map must be a closed degree-0 morphism"));
            }
        }
        Ok(ArrowObject { x1, x0, x })
    }

    /// `0 → X`.
    pub fn free(x0: TwistedComplex) -> Self {
        ArrowObject { x1: Vec::new(), x0, x: Vec::new() }
    }

    /// `X₁ → X₀` with a single part.
    pub fn from_morphism(amb: &Ambient, f: &TwistedMorphism) -> Result<Self> {
        if f.degree != 0 {
            return Err(precondition("structure map must have degree 0"));
        }
        Self::new(amb, vec![f.source.clone()], f.target.clone(), vec![f.matrix.clone()])
    }

    pub fn source(&self) -> usize {
        self.x0.source
    }

    pub fn target(&self) -> usize {
        self.x0.target
    }

    /// The parts of `X₁` as one twisted complex.
    pub fn x1_total(&self) -> Result<TwistedComplex> {
        self.x1.iter().try_fold(TwistedComplex::zero(self.source(), self.target()), |acc, p| acc.direct_sum(p))
    }

    /// Dimension of the total of each part.
    pub fn part_dims(&self, amb: &Ambient) -> Result<Vec<usize>> {
        self.x1.iter().map(|p| Ok(p.tot(amb)?.dim())).collect()
    }

    /// `x: X₁ → X₀` on totals.
    pub fn structure_map(&self, amb: &Ambient) -> Result<TwistedMorphism> {
        let n0 = self.x0.tot(amb)?.dim();
        let m = self.x.iter().fold(SparseMatrix::zero(n0, 0, amb.field()), |acc, b| acc.hstack(b));
        Ok(TwistedMorphism { source: self.x1_total()?, target: self.x0.clone(), degree: 0, matrix: m })
    }

    /// The bimodule `coker(x)` with the projection from `X₀`.
    pub fn concretize(&self, amb: &Ambient) -> Result<(Arc<DgBimodule>, BimoduleMap)> {
        let s = self.structure_map(amb)?;
        let (t1, t0) = (s.source.tot(amb)?, s.target.tot(amb)?);
        cokernel(&BimoduleMap::new(t1.module, t0.module, 0, s.matrix))
    }
}

/// A pair `(φ₀, φ₁)` with `φ₀ ∘ x = y ∘ φ₁`, maps on totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowMorphism {
    pub source: ArrowObject,
    pub target: ArrowObject,
    pub degree: i64,
    pub phi0: SparseMatrix,
    pub phi1: SparseMatrix,
}

struct Totals {
    x0: Arc<DgBimodule>,
    x1: Arc<DgBimodule>,
    x: SparseMatrix,
}

fn totals(amb: &Ambient, a: &ArrowObject) -> Result<Totals> {
    let s = a.structure_map(amb)?;
    Ok(Totals { x0: s.target.tot(amb)?.module, x1: s.source.tot(amb)?.module, x: s.matrix })
}

impl ArrowMorphism {
    pub fn new(
        amb: &Ambient,
        source: ArrowObject,
        target: ArrowObject,
        degree: i64,
        phi0: SparseMatrix,
        phi1: SparseMatrix,
    ) -> Result<Self> {
        let (a, b) = (totals(amb, &source)?, totals(amb, &target)?);
        if phi0.nrows() != b.x0.dim() || phi0.ncols() != a.x0.dim() || phi1.nrows() != b.x1.dim() || phi1.ncols() != a.x1.dim() {
            return Err(mismatch("components do not match the arrows"));
        }
        if !is_bimodule_map(&a.x0, &b.x0, degree, &phi0) || !is_bimodule_map(&a.x1, &b.x1, degree, &phi1) {
            return Err(precondition("components are not bimodule maps of the stated degree"));
        }
        if &phi0 * &a.x != &b.x * &phi1 {
            return Err(precondition("square does not commute"));
        }
        Ok(ArrowMorphism { source, target, degree, phi0, phi1 })
    }

    pub fn identity(amb: &Ambient, a: &ArrowObject) -> Result<Self> {
        let t = totals(amb, a)?;
        let field = amb.field();
        Ok(ArrowMorphism {
            source: a.clone(),
            target: a.clone(),
            degree: 0,
            phi0: SparseMatrix::identity(t.x0.dim(), field),
            phi1: SparseMatrix::identity(t.x1.dim(), field),
        })
    }

    pub fn zero(amb: &Ambient, a: &ArrowObject, b: &ArrowObject, degree: i64) -> Result<Self> {
        let (s, t) = (totals(amb, a)?, totals(amb, b)?);
        let field = amb.field();
        Ok(ArrowMorphism {
            source: a.clone(),
            target: b.clone(),
            degree,
            phi0: SparseMatrix::zero(t.x0.dim(), s.x0.dim(), field),
            phi1: SparseMatrix::zero(t.x1.dim(), s.x1.dim(), field),
        })
    }

    /// Componentwise differential.
    pub fn d(&self, amb: &Ambient) -> Result<ArrowMorphism> {
        let (a, b) = (totals(amb, &self.source)?, totals(amb, &self.target)?);
        Ok(ArrowMorphism {
            degree: self.degree + 1,
            phi0: hom_differential(&a.x0, &b.x0, self.degree, &self.phi0),
            phi1: hom_differential(&a.x1, &b.x1, self.degree, &self.phi1),
            ..self.clone()
        })
    }

    pub fn is_closed(&self, amb: &Ambient) -> Result<bool> {
        let d = self.d(amb)?;
        Ok(d.phi0.is_zero() && d.phi1.is_zero())
    }

    /// `self ∘ other`, componentwise.
    pub fn compose(&self, other: &ArrowMorphism) -> Result<ArrowMorphism> {
        if other.target != self.source {
            return Err(mismatch("arrow morphisms are not composable"));
        }
        Ok(ArrowMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            phi0: &self.phi0 * &other.phi0,
            phi1: &self.phi1 * &other.phi1,
        })
    }

    pub fn add(&self, other: &ArrowMorphism) -> ArrowMorphism {
        ArrowMorphism { phi0: &self.phi0 + &other.phi0, phi1: &self.phi1 + &other.phi1, ..self.clone() }
    }

    pub fn sub(&self, other: &ArrowMorphism) -> ArrowMorphism {
        ArrowMorphism { phi0: &self.phi0 - &other.phi0, phi1: &self.phi1 - &other.phi1, ..self.clone() }
    }

    /// The induced map of cokernels.
    pub fn concretize(&self, amb: &Ambient) -> Result<BimoduleMap> {
        let (cs, ps) = self.source.concretize(amb)?;
        let (ct, pt) = self.target.concretize(amb)?;
        // a basis vector of coker(x) is the image of a kept basis vector of X₀
        let kept: Vec<usize> = (0..ps.matrix.ncols())
            .filter(|&i| {
                let c = ps.matrix.col(i);
                c.len() == 1 && c[0].1.is_one() && cs.label(c[0].0) == ps.source.label(i)
            })
            .collect();
        let mut cols = vec![Vec::new(); cs.dim()];
        for i in kept {
            let q = ps.matrix.col(i)[0].0;
            cols[q] = pt.matrix.apply(self.phi0.col(i));
        }
        Ok(BimoduleMap::new(cs, ct, self.degree, SparseMatrix::from_columns(pt.matrix.nrows(), amb.field(), cols)))
    }
}

#[derive(Clone, Debug)]
struct QuotientPiece {
    offset: usize,
    reps: Vec<SparseVec>,
    killed: Vec<SparseVec>,
}

/// `Hom(a, b)` in the arrow category: commuting pairs modulo the pairs whose
/// `φ₀` factors as `y ∘ η`. Basis elements are coset representatives chosen
/// deterministically against the factoring subspace.
#[derive(Clone, Debug)]
pub struct VvHom {
    pub source: ArrowObject,
    pub target: ArrowObject,
    pub complex: Complex,
    pieces: BTreeMap<i64, QuotientPiece>,
    shape: [usize; 4],
}

fn pair_vec(phi0: &SparseMatrix, phi1: &SparseMatrix) -> SparseVec {
    let off = phi0.nrows() * phi0.ncols();
    let mut v = phi0.flatten();
    v.extend(phi1.flatten().into_iter().map(|(i, c)| (i + off, c)));
    v
}

fn combine(basis: &[SparseMatrix], c: &SparseVec, nrows: usize, ncols: usize, field: Field) -> SparseMatrix {
    c.iter().fold(SparseMatrix::zero(nrows, ncols, field), |acc, (j, v)| &acc + &basis[*j].scaled(v))
}

impl VvHom {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(d, p)| (*d, p.reps.len())).filter(|(_, n)| *n > 0).collect()
    }

    pub fn dim(&self) -> usize {
        self.complex.space.dim()
    }

    pub fn cohomology_dim(&self, n: i64) -> usize {
        self.complex.cohomology(n).0
    }

    fn split(&self, v: &SparseVec) -> (SparseMatrix, SparseMatrix) {
        let [r0, c0, r1, c1] = self.shape;
        let off = r0 * c0;
        let field = self.complex.field();
        let a: SparseVec = v.iter().filter(|(i, _)| *i < off).cloned().collect();
        let b: SparseVec = v.iter().filter(|(i, _)| *i >= off).map(|(i, c)| (i - off, c.clone())).collect();
        (SparseMatrix::unflatten(&a, r0, c0, field), SparseMatrix::unflatten(&b, r1, c1, field))
    }

    /// The representative of basis element `i`.
    pub fn representative(&self, i: usize) -> ArrowMorphism {
        let (d, piece) = self.pieces.iter().find(|(_, p)| i >= p.offset && i < p.offset + p.reps.len()).expect("basis index");
        let (phi0, phi1) = self.split(&piece.reps[i - piece.offset]);
        ArrowMorphism { source: self.source.clone(), target: self.target.clone(), degree: *d, phi0, phi1 }
    }

    /// Coordinates of the class of `f` in the basis of the quotient.
    pub fn class_of(&self, f: &ArrowMorphism) -> Result<SparseVec> {
        if f.source != self.source || f.target != self.target {
            return Err(mismatch("morphism between other arrows"));
        }
        let Some(piece) = self.pieces.get(&f.degree) else {
            return if f.phi0.is_zero() && f.phi1.is_zero() { Ok(Vec::new()) } else { Err(precondition("degree outside the hom space")) };
        };
        let [r0, c0, r1, c1] = self.shape;
        let mut cols = piece.reps.clone();
        cols.extend(piece.killed.iter().cloned());
        let c = solve_columns(&cols, r0 * c0 + r1 * c1, &pair_vec(&f.phi0, &f.phi1), self.complex.field())
            .ok_or_else(|| precondition("not a commuting pair"))?;
        Ok(c.into_iter().filter(|(j, _)| *j < piece.reps.len()).map(|(j, v)| (j + piece.offset, v)).collect())
    }

    pub fn is_zero_class(&self, f: &ArrowMorphism) -> Result<bool> {
        Ok(self.class_of(f)?.is_empty())
    }
}

pub fn vv_hom(amb: &Ambient, a: &ArrowObject, b: &ArrowObject) -> Result<VvHom> {
    if a.source() != b.source() || a.target() != b.target() {
        return Err(mismatch("hom between arrows with different endpoints"));
    }
    let field = amb.field();
    let (s, t) = (totals(amb, a)?, totals(amb, b)?);
    let shape = [t.x0.dim(), s.x0.dim(), t.x1.dim(), s.x1.dim()];
    let total = shape[0] * shape[1] + shape[2] * shape[3];
    let r0 = degree_range(&s.x0, &t.x0);
    let r1 = degree_range(&s.x1, &t.x1);
    let (lo, hi) = match (r0.0 <= r0.1, r1.0 <= r1.1) {
        (true, true) => (r0.0.min(r1.0), r0.1.max(r1.1)),
        (true, false) => r0,
        (false, true) => r1,
        (false, false) => (0, -1),
    };

    let mut pieces = BTreeMap::new();
    let mut basis = Vec::new();
    for d in lo..=hi {
        let h00 = HomSpace::new(&s.x0, &t.x0, d)?.elements();
        let h11 = HomSpace::new(&s.x1, &t.x1, d)?.elements();
        let h01 = HomSpace::new(&s.x0, &t.x1, d)?.elements();
        let n_sq = t.x0.dim() * s.x1.dim();
        let mut cols: Vec<SparseVec> = h00.iter().map(|e| (e * &s.x).flatten()).collect();
        cols.extend(h11.iter().map(|f| (-&(&t.x * f)).flatten()));
        let commuting: Vec<SparseVec> = kernel_of_columns(&cols, n_sq, field)
            .iter()
            .map(|c| {
                let (c0, c1): (SparseVec, SparseVec) = (
                    c.iter().filter(|(j, _)| *j < h00.len()).cloned().collect(),
                    c.iter().filter(|(j, _)| *j >= h00.len()).map(|(j, v)| (j - h00.len(), v.clone())).collect(),
                );
                pair_vec(
                    &combine(&h00, &c0, shape[0], shape[1], field),
                    &combine(&h11, &c1, shape[2], shape[3], field),
                )
            })
            .collect();
        let mut killed: Vec<SparseVec> = h01.iter().map(|eta| pair_vec(&(&t.x * eta), &(eta * &s.x))).collect();
        let ycols: Vec<SparseVec> = h11.iter().map(|f| (&t.x * f).flatten()).collect();
        for c in kernel_of_columns(&ycols, t.x0.dim() * t.x1.dim(), field) {
            let kappa = combine(&h11, &c, shape[2], shape[3], field);
            killed.push(pair_vec(&SparseMatrix::zero(shape[0], shape[1], field), &kappa));
        }
        let mut e = Echelon::new(total, field);
        for k in &killed {
            e.insert(k.clone());
        }
        let reps: Vec<SparseVec> = commuting.into_iter().filter(|v| e.insert(v.clone())).collect();
        for i in 0..reps.len() {
            basis.push((format!("[{d}].{i}"), d));
        }
        pieces.insert(d, QuotientPiece { offset: 0, reps, killed });
    }
    let mut off = 0;
    for p in pieces.values_mut() {
        p.offset = off;
        off += p.reps.len();
    }
    let mut h = VvHom {
        source: a.clone(),
        target: b.clone(),
        complex: Complex::new(GradedSpace::new(field, Vec::new())?, Vec::new())?,
        pieces,
        shape,
    };
    let mut diff = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let r = h.representative(i);
        let dr = r.d(amb)?;
        diff.push(h.class_of(&dr)?);
    }
    h.complex = Complex::new(GradedSpace::new(field, basis)?, diff)?;
    Ok(h)
}

fn part_morphism(amb: &Ambient, src: &TwistedComplex, tgt: &TwistedComplex, degree: i64, m: SparseMatrix) -> Result<TwistedMorphism> {
    TwistedMorphism::new(amb, src.clone(), tgt.clone(), degree, m)
}

/// `(G₁ → G₀)(H₁ → H₀) = (G₁H₀ ⊕ G₀H₁ → G₀H₀)`, part by part.
pub fn vv_compose(amb: &Ambient, g: &ArrowObject, h: &ArrowObject) -> Result<ArrowObject> {
    if g.source() != h.target() {
        return Err(mismatch("arrows are not composable"));
    }
    let x0 = compose(amb, &g.x0, &h.x0)?;
    let id_h0 = TwistedMorphism::identity(amb, &h.x0)?;
    let id_g0 = TwistedMorphism::identity(amb, &g.x0)?;
    let mut x1 = Vec::new();
    let mut x = Vec::new();
    for (p, m) in g.x1.iter().zip(&g.x) {
        let f = part_morphism(amb, p, &g.x0, 0, m.clone())?;
        let c = hcomp_morphisms(amb, &f, &id_h0)?;
        x1.push(c.source);
        x.push(c.matrix);
    }
    for (q, m) in h.x1.iter().zip(&h.x) {
        let f = part_morphism(amb, q, &h.x0, 0, m.clone())?;
        let c = hcomp_morphisms(amb, &id_g0, &f)?;
        x1.push(c.source);
        x.push(c.matrix);
    }
    Ok(ArrowObject { x1, x0, x })
}

/// Action of an arrow 1-morphism `g` on an arrow object `m` of the
/// representation on 1-morphisms into `g`'s source; the formula is that of
/// composition, `(G₁X₀ ⊕ G₀X₁ → G₀X₀)`.
pub fn vv_action(amb: &Ambient, g: &ArrowObject, m: &ArrowObject) -> Result<ArrowObject> {
    vv_compose(amb, g, m)
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for d in dims {
        out.push(acc);
        acc += d;
    }
    out
}

/// `(φ₀, φ₁) ∘₀ (ψ₀, ψ₁) = (φ₀ ∘₀ ψ₀, diag(φ₁ ∘₀ ψ₀, φ₀ ∘₀ ψ₁))`.
pub fn vv_hcomp_morphisms(amb: &Ambient, phi: &ArrowMorphism, psi: &ArrowMorphism) -> Result<ArrowMorphism> {
    let (g, gp, h, hp) = (&phi.source, &phi.target, &psi.source, &psi.target);
    let source = vv_compose(amb, g, h)?;
    let target = vv_compose(amb, gp, hp)?;
    let field = amb.field();
    let phi0 = part_morphism(amb, &g.x0, &gp.x0, phi.degree, phi.phi0.clone())?;
    let psi0 = part_morphism(amb, &h.x0, &hp.x0, psi.degree, psi.phi0.clone())?;
    let top = hcomp_morphisms(amb, &phi0, &psi0)?;

    let (sd, td) = (source.part_dims(amb)?, target.part_dims(amb)?);
    let (so, to) = (offsets(&sd), offsets(&td));
    let mut m1 = SparseMatrix::zero(td.iter().sum(), sd.iter().sum(), field);
    let one = field.one();
    let (gd, gpd) = (offsets(&g.part_dims(amb)?), offsets(&gp.part_dims(amb)?));
    for (p, gpart) in g.x1.iter().enumerate() {
        for (pp, gppart) in gp.x1.iter().enumerate() {
            let (r0, c0) = (gpd[pp], gd[p]);
            let blk = phi.phi1.block(r0..r0 + gppart.tot(amb)?.dim(), c0..c0 + gpart.tot(amb)?.dim());
            if blk.is_zero() {
                continue;
            }
            let b = part_morphism(amb, gpart, gppart, phi.degree, blk)?;
            let c = hcomp_morphisms(amb, &b, &psi0)?;
            m1.add_block(to[pp], so[p], &one, &c.matrix);
        }
    }
    let (ng, ngp) = (g.x1.len(), gp.x1.len());
    let (hd, hpd) = (offsets(&h.part_dims(amb)?), offsets(&hp.part_dims(amb)?));
    for (q, hpart) in h.x1.iter().enumerate() {
        for (qq, hppart) in hp.x1.iter().enumerate() {
            let (r0, c0) = (hpd[qq], hd[q]);
            let blk = psi.phi1.block(r0..r0 + hppart.tot(amb)?.dim(), c0..c0 + hpart.tot(amb)?.dim());
            if blk.is_zero() {
                continue;
            }
            let b = part_morphism(amb, hpart, hppart, psi.degree, blk)?;
            let c = hcomp_morphisms(amb, &phi0, &b)?;
            m1.add_block(to[ngp + qq], so[ng + q], &one, &c.matrix);
        }
    }
    ArrowMorphism::new(amb, source, target, phi.degree + psi.degree, top.matrix, m1)
}

/// Cokernel of a closed degree-0 `f: X → Y`: `(Y₁ ⊕ X₀ → Y₀)` with
/// structure map `(y, f₀)`, together with the projection from `Y`.
pub fn vv_cokernel(amb: &Ambient, f: &ArrowMorphism) -> Result<(ArrowObject, ArrowMorphism)> {
    if f.degree != 0 || !f.is_closed(amb)? {
        return Err(precondition("cokernel needs a closed degree-0 morphism"));
    }
    let (x, y) = (&f.source, &f.target);
    let mut x1 = y.x1.clone();
    x1.push(x.x0.clone());
    let mut maps = y.x.clone();
    maps.push(f.phi0.clone());
    let c = ArrowObject { x1, x0: y.x0.clone(), x: maps };
    let field = amb.field();
    let ty = totals(amb, y)?;
    let tc = totals(amb, &c)?;
    let proj = ArrowMorphism::new(
        amb,
        y.clone(),
        c.clone(),
        0,
        SparseMatrix::identity(ty.x0.dim(), field),
        SparseMatrix::identity(ty.x1.dim(), field).embed(tc.x1.dim(), ty.x1.dim(), 0, 0),
    )?;
    Ok((c, proj))
}

/// The factorization `u: coker(f) → W` of `g: Y → W` through the projection,
/// or `None` when `g ∘ f` is not zero in the arrow category.
pub fn cokernel_factorization(amb: &Ambient, f: &ArrowMorphism, g: &ArrowMorphism) -> Result<Option<ArrowMorphism>> {
    if g.source != f.target {
        return Err(mismatch("g does not start at the target of f"));
    }
    let (c, _) = vv_cokernel(amb, f)?;
    let (tx, tw) = (totals(amb, &f.source)?, totals(amb, &g.target)?);
    let field = amb.field();
    // η: X₀ → W₁ with g₀ f₀ = w η
    let etas = HomSpace::new(&tx.x0, &tw.x1, g.degree)?.elements();
    let cols: Vec<SparseVec> = etas.iter().map(|e| (&tw.x * e).flatten()).collect();
    let target = (&g.phi0 * &f.phi0).flatten();
    let Some(sol) = solve_columns(&cols, tw.x0.dim() * tx.x0.dim(), &target, field) else { return Ok(None) };
    let eta = combine(&etas, &sol, tw.x1.dim(), tx.x0.dim(), field);
    Ok(Some(ArrowMorphism::new(amb, c, g.target.clone(), g.degree, g.phi0.clone(), g.phi1.hstack(&eta))?))
}
