use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Ambient;
use crate::dgbimod::{is_bimodule_map, DgBimodule, HomComplex};
use crate::error::{mismatch, precondition, Result};
use crate::linalg::{Scalar, SparseMatrix};
use crate::report::AlgebraReport;

/// A summand `F⟨shift⟩` of a twisted complex, `F` a word of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Summand {
    pub word: Vec<usize>,
    pub shift: i64,
}

/// A one-sided twisted complex `(⊕ F_m⟨s_m⟩, α)` of 1-morphisms `source → target`.
///
/// `alpha[(k, l)]` (with `k < l`) is the component `F_l → F_k`, stored as a
/// map of the unshifted realized bimodules; as such it has degree
/// `1 + s_k - s_l`. The summand order is part of the data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    pub source: usize,
    pub target: usize,
    pub summands: Vec<Summand>,
    pub alpha: BTreeMap<(usize, usize), SparseMatrix>,
}

/// The total bimodule `⊕ F_m⟨s_m⟩` with differential `D + α`.
#[derive(Clone, Debug)]
pub struct Tot {
    pub module: Arc<DgBimodule>,
    pub offsets: Vec<usize>,
    pub dims: Vec<usize>,
}

impl Tot {
    pub fn range(&self, m: usize) -> Range<usize> {
        self.offsets[m]..self.offsets[m] + self.dims[m]
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn block(&self, target: &Tot, f: &SparseMatrix, k: usize, l: usize) -> SparseMatrix {
        f.block(target.range(k), self.range(l))
    }
}

impl TwistedComplex {
    pub fn zero(source: usize, target: usize) -> Self {
        TwistedComplex { source, target, summands: Vec::new(), alpha: BTreeMap::new() }
    }

    /// The complex with a single summand `word⟨shift⟩`.
    pub fn one_term(amb: &Ambient, source: usize, word: Vec<usize>, shift: i64) -> Result<Self> {
        let (s, t) = amb.endpoints(source, &word)?;
        if s != source {
            return Err(mismatch("word does not start at the given object"));
        }
        Ok(TwistedComplex { source: s, target: t, summands: vec![Summand { word, shift }], alpha: BTreeMap::new() })
    }

    /// The identity 1-morphism of an object.
    pub fn identity(obj: usize) -> Self {
        TwistedComplex {
            source: obj,
            target: obj,
            summands: vec![Summand { word: Vec::new(), shift: 0 }],
            alpha: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Degree of the unshifted map underlying `α_{k,l}`.
    pub fn alpha_degree(&self, k: usize, l: usize) -> i64 {
        1 + self.summands[k].shift - self.summands[l].shift
    }

    pub fn summand_module(&self, amb: &Ambient, m: usize) -> Result<Arc<DgBimodule>> {
        Ok(amb.realize(self.source, &self.summands[m].word)?.module.clone())
    }

    pub fn tot(&self, amb: &Ambient) -> Result<Tot> {
        let mods = (0..self.len()).map(|m| self.summand_module(amb, m)).collect::<Result<Vec<_>>>()?;
        let parts: Vec<(&DgBimodule, i64)> = mods.iter().zip(&self.summands).map(|(m, s)| (&**m, s.shift)).collect();
        let sum = DgBimodule::direct_sum(&parts, amb.algebra(self.target).clone(), amb.algebra(self.source).clone())?;
        let dims: Vec<usize> = mods.iter().map(|m| m.dim()).collect();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut acc = 0;
        for d in &dims {
            offsets.push(acc);
            acc += d;
        }
        let mut diff = sum.diff().clone();
        let one = amb.field().one();
        for ((k, l), a) in &self.alpha {
            diff.add_block(offsets[*k], offsets[*l], &one, a);
        }
        Ok(Tot { module: Arc::new(sum.with_diff(diff)), offsets, dims })
    }

    /// Strict upper triangularity, component degrees and bimodule compatibility,
    /// and the Maurer–Cartan equation `(D + α)² = 0`.
    pub fn mc_check(&self, amb: &Ambient) -> Result<AlgebraReport> {
        let mut r = AlgebraReport::new();
        if amb.endpoints(self.source, &[]).is_err() {
            r.fail("objects", vec![]);
        }
        for (m, s) in self.summands.iter().enumerate() {
            match amb.endpoints(self.source, &s.word) {
                Ok((a, b)) if a == self.source && b == self.target => {}
                _ => r.fail("summand-endpoints", vec![m.to_string()]),
            }
        }
        if !r.passed {
            return Ok(r);
        }
        let mods = (0..self.len()).map(|m| self.summand_module(amb, m)).collect::<Result<Vec<_>>>()?;
        for ((k, l), a) in &self.alpha {
            let w = vec![k.to_string(), l.to_string()];
            if k >= l || *l >= self.len() {
                r.fail("strictly-upper-triangular", w);
                continue;
            }
            if a.nrows() != mods[*k].dim() || a.ncols() != mods[*l].dim() {
                r.fail("component-shape", w);
                continue;
            }
            if !is_bimodule_map(&mods[*l], &mods[*k], self.alpha_degree(*k, *l), a) {
                r.fail("component-bimodule-map", w);
            }
        }
        if !r.passed {
            return Ok(r);
        }
        let tot = self.tot(amb)?;
        let d = tot.module.diff();
        let d2 = d * d;
        if !d2.is_zero() {
            let (i, j, _) = d2.entries().next().unwrap();
            let k = (0..self.len()).find(|&m| tot.range(m).contains(&i)).unwrap();
            let l = (0..self.len()).find(|&m| tot.range(m).contains(&j)).unwrap();
            r.fail("maurer-cartan", vec![k.to_string(), l.to_string()]);
        }
        Ok(r)
    }

    /// Strict direct sum: summands concatenated, twist block diagonal.
    pub fn direct_sum(&self, other: &TwistedComplex) -> Result<TwistedComplex> {
        if self.source != other.source || self.target != other.target {
            return Err(mismatch("direct sum of complexes between different objects"));
        }
        let n = self.len();
        let mut out = self.clone();
        out.summands.extend(other.summands.iter().cloned());
        for ((k, l), a) in &other.alpha {
            out.alpha.insert((k + n, l + n), a.clone());
        }
        Ok(out)
    }

    /// `X⟨k⟩`: every summand shift moves by `k` and the twist by `(-1)^k`.
    pub fn shift(&self, k: i64) -> TwistedComplex {
        let mut out = self.clone();
        for s in &mut out.summands {
            s.shift += k;
        }
        if k % 2 != 0 {
            for a in out.alpha.values_mut() {
                *a = -&*a;
            }
        }
        out
    }
}

/// Free-function form of [`TwistedComplex::mc_check`].
pub fn mc_check(amb: &Ambient, x: &TwistedComplex) -> Result<AlgebraReport> {
    x.mc_check(amb)
}

pub fn direct_sum(x: &TwistedComplex, y: &TwistedComplex) -> Result<TwistedComplex> {
    x.direct_sum(y)
}

pub fn shift_twisted(x: &TwistedComplex, k: i64) -> TwistedComplex {
    x.shift(k)
}

/// A homogeneous morphism of twisted complexes, as a matrix on the totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMorphism {
    pub source: TwistedComplex,
    pub target: TwistedComplex,
    pub degree: i64,
    pub matrix: SparseMatrix,
}

impl TwistedMorphism {
    pub fn new(amb: &Ambient, source: TwistedComplex, target: TwistedComplex, degree: i64, matrix: SparseMatrix) -> Result<Self> {
        let (s, t) = (source.tot(amb)?, target.tot(amb)?);
        if matrix.nrows() != t.dim() || matrix.ncols() != s.dim() {
            return Err(mismatch("morphism matrix does not match the totals"));
        }
        Ok(TwistedMorphism { source, target, degree, matrix })
    }

    pub fn identity(amb: &Ambient, x: &TwistedComplex) -> Result<Self> {
        let n = x.tot(amb)?.dim();
        Ok(TwistedMorphism { source: x.clone(), target: x.clone(), degree: 0, matrix: SparseMatrix::identity(n, amb.field()) })
    }

    pub fn zero(amb: &Ambient, source: &TwistedComplex, target: &TwistedComplex, degree: i64) -> Result<Self> {
        let (s, t) = (source.tot(amb)?, target.tot(amb)?);
        Ok(TwistedMorphism {
            source: source.clone(),
            target: target.clone(),
            degree,
            matrix: SparseMatrix::zero(t.dim(), s.dim(), amb.field()),
        })
    }

    /// `∂γ = D_Y γ - (-1)^{|γ|} γ D_X`.
    pub fn d(&self, amb: &Ambient) -> Result<TwistedMorphism> {
        let (s, t) = (self.source.tot(amb)?, self.target.tot(amb)?);
        let a = t.module.diff() * &self.matrix;
        let b = &self.matrix * s.module.diff();
        let matrix = if self.degree % 2 == 0 { &a - &b } else { &a + &b };
        Ok(TwistedMorphism { degree: self.degree + 1, matrix, ..self.clone() })
    }

    pub fn is_closed(&self, amb: &Ambient) -> Result<bool> {
        Ok(self.d(amb)?.matrix.is_zero())
    }

    pub fn is_morphism(&self, amb: &Ambient) -> Result<bool> {
        let (s, t) = (self.source.tot(amb)?, self.target.tot(amb)?);
        Ok(is_bimodule_map(&s.module, &t.module, self.degree, &self.matrix))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TwistedMorphism) -> Result<TwistedMorphism> {
        if other.target != self.source {
            return Err(mismatch("morphisms are not composable"));
        }
        Ok(TwistedMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn scaled(&self, c: &Scalar) -> TwistedMorphism {
        TwistedMorphism { matrix: self.matrix.scaled(c), ..self.clone() }
    }

    pub fn add(&self, other: &TwistedMorphism) -> TwistedMorphism {
        TwistedMorphism { matrix: &self.matrix + &other.matrix, ..self.clone() }
    }

    pub fn sub(&self, other: &TwistedMorphism) -> TwistedMorphism {
        TwistedMorphism { matrix: &self.matrix - &other.matrix, ..self.clone() }
    }
}

/// The cone of a closed degree-0 morphism with its structure maps.
///
/// `cone = (Y ⊕ X⟨1⟩)` with twist `[[β, -f], [0, -α]]`; `inc: Y → cone` and
/// `out: cone⟨-1⟩ → X` are the inclusion and projection, and the homotopies
/// satisfy `∂(inc_homotopy) = inc ∘ f` and `∂(out_homotopy) = f ∘ out`.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub cone: TwistedComplex,
    pub inc: TwistedMorphism,
    pub out: TwistedMorphism,
    pub inc_homotopy: TwistedMorphism,
    pub out_homotopy: TwistedMorphism,
}

pub fn cone(amb: &Ambient, f: &TwistedMorphism) -> Result<ConeData> {
    if f.degree != 0 || !f.is_closed(amb)? {
        return Err(precondition("cone needs a closed degree-0 morphism"));
    }
    let (x, y) = (&f.source, &f.target);
    let (tx, ty) = (x.tot(amb)?, y.tot(amb)?);
    let field = amb.field();
    let xs = x.shift(1);
    let mut c = y.direct_sum(&xs)?;
    let ny = y.len();
    let minus_f = -&f.matrix;
    for k in 0..ny {
        for l in 0..x.len() {
            let b = tx.block(&ty, &minus_f, k, l);
            if !b.is_zero() {
                c.alpha.insert((k, ny + l), b);
            }
        }
    }
    let (dy, dx) = (ty.dim(), tx.dim());
    let n = dy + dx;
    let ident = |m: usize| SparseMatrix::identity(m, field);
    let inc = ident(dy).embed(n, dy, 0, 0);
    let x_part = ident(dx).embed(n, dx, dy, 0);
    let pr_x = ident(dx).embed(dx, n, 0, dy);
    let pr_y = ident(dy).embed(dy, n, 0, 0);
    let shifted = c.shift(-1);
    Ok(ConeData {
        inc: TwistedMorphism { source: y.clone(), target: c.clone(), degree: 0, matrix: inc },
        out: TwistedMorphism { source: shifted.clone(), target: x.clone(), degree: 0, matrix: pr_x },
        inc_homotopy: TwistedMorphism { source: x.clone(), target: c.clone(), degree: -1, matrix: -&x_part },
        out_homotopy: TwistedMorphism { source: shifted, target: y.clone(), degree: -1, matrix: pr_y },
        cone: c,
    })
}

/// `x ∘ y` for `x: j → k` and `y: i → j`: summands `F_m G_n` in lexicographic
/// order, twist `α_{kl} ∘₀ id` and `id ∘₀ α'_{k'l'}` with the signs of the
/// shifted Koszul rule.
pub fn compose(amb: &Ambient, x: &TwistedComplex, y: &TwistedComplex) -> Result<TwistedComplex> {
    if x.source != y.target {
        return Err(mismatch("complexes are not composable"));
    }
    let (i, j) = (y.source, y.target);
    let ny = y.len();
    let idx = |m: usize, n: usize| m * ny + n;
    let mut summands = Vec::with_capacity(x.len() * ny);
    for a in &x.summands {
        for b in &y.summands {
            summands.push(Summand { word: [a.word.as_slice(), b.word.as_slice()].concat(), shift: a.shift + b.shift });
        }
    }
    let mut alpha: BTreeMap<(usize, usize), SparseMatrix> = BTreeMap::new();
    for ((k, l), a) in &x.alpha {
        let deg = x.alpha_degree(*k, *l);
        for (m, g) in y.summands.iter().enumerate() {
            let id = amb.identity(i, &g.word)?;
            let mut h = amb.hcomp(i, j, (&x.summands[*l].word, &x.summands[*k].word), a, (&g.word, &g.word), &id, 0)?;
            if (g.shift * deg) % 2 != 0 {
                h = -&h;
            }
            if !h.is_zero() {
                alpha.insert((idx(*k, m), idx(*l, m)), h);
            }
        }
    }
    for ((k, l), b) in &y.alpha {
        let deg = y.alpha_degree(*k, *l);
        for (m, f) in x.summands.iter().enumerate() {
            let id = amb.identity(j, &f.word)?;
            let mut h = amb.hcomp(i, j, (&f.word, &f.word), &id, (&y.summands[*l].word, &y.summands[*k].word), b, deg)?;
            if f.shift % 2 != 0 {
                h = -&h;
            }
            if !h.is_zero() {
                alpha.insert((idx(m, *k), idx(m, *l)), h);
            }
        }
    }
    Ok(TwistedComplex { source: i, target: x.target, summands, alpha })
}

/// Horizontal composite `γ ∘₀ δ: XY → X'Y'` of morphisms `γ: X → X'` and
/// `δ: Y → Y'`, with `(γ ∘₀ δ)(x ⊗ y) = (-1)^{|δ||x|} γx ⊗ δy` on totals.
pub fn hcomp_morphisms(amb: &Ambient, g: &TwistedMorphism, d: &TwistedMorphism) -> Result<TwistedMorphism> {
    let (x, xp, y, yp) = (&g.source, &g.target, &d.source, &d.target);
    if x.source != y.target || xp.source != yp.target {
        return Err(mismatch("morphisms are not horizontally composable"));
    }
    let (i, j) = (y.source, y.target);
    let source = compose(amb, x, y)?;
    let target = compose(amb, xp, yp)?;
    let (tx, txp, ty, typ) = (x.tot(amb)?, xp.tot(amb)?, y.tot(amb)?, yp.tot(amb)?);
    let (ts, tt) = (source.tot(amb)?, target.tot(amb)?);
    let mut matrix = SparseMatrix::zero(tt.dim(), ts.dim(), amb.field());
    let one = amb.field().one();
    for l in 0..x.len() {
        for k in 0..xp.len() {
            let gb = tx.block(&txp, &g.matrix, k, l);
            if gb.is_zero() {
                continue;
            }
            let c = g.degree + xp.summands[k].shift - x.summands[l].shift;
            for lp in 0..y.len() {
                for kp in 0..yp.len() {
                    let db = ty.block(&typ, &d.matrix, kp, lp);
                    if db.is_zero() {
                        continue;
                    }
                    let e = d.degree + yp.summands[kp].shift - y.summands[lp].shift;
                    let mut h = amb.hcomp(
                        i,
                        j,
                        (&x.summands[l].word, &xp.summands[k].word),
                        &gb,
                        (&y.summands[lp].word, &yp.summands[kp].word),
                        &db,
                        e,
                    )?;
                    if (d.degree * x.summands[l].shift + yp.summands[kp].shift * c) % 2 != 0 {
                        h = -&h;
                    }
                    let (r, s) = (k * yp.len() + kp, l * y.len() + lp);
                    matrix.add_block(tt.offsets[r], ts.offsets[s], &one, &h);
                }
            }
        }
    }
    Ok(TwistedMorphism { source, target, degree: g.degree + d.degree, matrix })
}

/// The Hom complex between two twisted complexes with the same endpoints.
pub fn twisted_hom_complex(amb: &Ambient, x: &TwistedComplex, y: &TwistedComplex) -> Result<HomComplex> {
    if x.source != y.source || x.target != y.target {
        return Err(mismatch("hom between complexes with different endpoints"));
    }
    HomComplex::new(x.tot(amb)?.module, y.tot(amb)?.module)
}
