//! Homotopy categories: cohomology of Hom complexes, null-homotopies,
//! Gaussian reduction and certified homotopy equivalences.

mod cert;
mod equiv;
mod reduce;

use std::sync::Arc;

use crate::dgbimod::{DgBimodule, HomSpace};
use crate::error::{precondition, Result};
use crate::linalg::sparse::{kernel_of_columns, solve_columns, Echelon};
use crate::linalg::{Complex, SparseMatrix, SparseVec};
use crate::twisted::{Ambient, TwistedComplex, TwistedMorphism};

pub use cert::Certificate;
pub use equiv::{homotopy_equivalent, EquivOptions, Verdict};
pub use reduce::gaussian_reduce;

/// `dim H^n` of a complex of vector spaces with representatives.
pub fn cohomology(c: &Complex, n: i64) -> Result<(usize, Vec<SparseVec>)> {
    if !c.squares_to_zero() {
        return Err(precondition("differential does not square to zero"));
    }
    Ok(c.cohomology(n))
}

fn coords_of_d(m: &DgBimodule, n: &DgBimodule, from: &HomSpace, to: &HomSpace) -> Result<Vec<SparseVec>> {
    from.elements()
        .iter()
        .map(|f| {
            let df = crate::dgbimod::hom_differential(m, n, from.degree, f);
            to.coords(&df).ok_or_else(|| precondition("differential leaves the hom space"))
        })
        .collect()
}

/// A basis of the closed degree-`d` bimodule maps `m → n`.
pub fn closed_maps(m: &DgBimodule, n: &DgBimodule, d: i64) -> Result<Vec<SparseMatrix>> {
    let hs = HomSpace::new(m, n, d)?;
    let ht = HomSpace::new(m, n, d + 1)?;
    let cols = coords_of_d(m, n, &hs, &ht)?;
    Ok(kernel_of_columns(&cols, ht.dim(), m.field()).iter().map(|c| hs.from_coords(c)).collect())
}

/// Closed maps of degree `d` whose classes form a basis of `H^d(Hom(m, n))`.
pub fn cohomology_representatives(m: &DgBimodule, n: &DgBimodule, d: i64) -> Result<Vec<SparseMatrix>> {
    let hs = HomSpace::new(m, n, d)?;
    let hp = HomSpace::new(m, n, d - 1)?;
    let mut e = Echelon::new(hs.dim(), m.field());
    for c in coords_of_d(m, n, &hp, &hs)? {
        e.insert(c);
    }
    let mut reps = Vec::new();
    for z in closed_maps(m, n, d)? {
        let c = hs.coords(&z).expect("closed map in its own hom space");
        if e.insert(c) {
            reps.push(z);
        }
    }
    Ok(reps)
}

/// `dim H^d(Hom(m, n))`.
pub fn hom_cohomology_dim(m: &DgBimodule, n: &DgBimodule, d: i64) -> Result<usize> {
    Ok(cohomology_representatives(m, n, d)?.len())
}

/// Some `h` of degree `d - 1` with `∂h = f` for a degree-`d` map `f: m → n`.
pub fn solve_boundary(m: &DgBimodule, n: &DgBimodule, d: i64, f: &SparseMatrix) -> Result<Option<SparseMatrix>> {
    let hs = HomSpace::new(m, n, d)?;
    let Some(target) = hs.coords(f) else {
        return Err(precondition("map is not a bimodule map of the stated degree"));
    };
    let hp = HomSpace::new(m, n, d - 1)?;
    let cols = coords_of_d(m, n, &hp, &hs)?;
    Ok(solve_columns(&cols, hs.dim(), &target, m.field()).map(|c| hp.from_coords(&c)))
}

/// A null-homotopy `h` with `∂h = f` for a closed twisted morphism, or `None`
/// when `f` is not a boundary.
pub fn null_homotopy_witness(amb: &Ambient, f: &TwistedMorphism) -> Result<Option<TwistedMorphism>> {
    if !f.is_closed(amb)? {
        return Err(precondition("null-homotopy of a non-closed morphism"));
    }
    let (s, t) = (f.source.tot(amb)?, f.target.tot(amb)?);
    Ok(solve_boundary(&s.module, &t.module, f.degree, &f.matrix)?.map(|h| TwistedMorphism {
        source: f.source.clone(),
        target: f.target.clone(),
        degree: f.degree - 1,
        matrix: h,
    }))
}

/// Whether `∂h = id` has a solution, with the solution.
pub fn is_acyclic_bimodule(m: &Arc<DgBimodule>) -> Result<Option<SparseMatrix>> {
    solve_boundary(m, m, 0, &SparseMatrix::identity(m.dim(), m.field()))
}

/// Whether the identity of `x` is a boundary, with a witness `h`, `∂h = id`.
pub fn is_acyclic_object(amb: &Ambient, x: &TwistedComplex) -> Result<(bool, Option<TwistedMorphism>)> {
    let id = TwistedMorphism::identity(amb, x)?;
    let h = null_homotopy_witness(amb, &id)?;
    Ok((h.is_some(), h))
}

/// Whether a closed degree-0 map of complexes induces isomorphisms on all
/// cohomology groups, tested by acyclicity of its mapping cone.
pub fn is_quasi_isomorphism(source: &Complex, target: &Complex, f: &SparseMatrix) -> Result<bool> {
    let field = source.field();
    let (ns, nt) = (source.space.dim(), target.space.dim());
    if f.nrows() != nt || f.ncols() != ns {
        return Err(precondition("map does not match the complexes"));
    }
    for i in 0..ns {
        for (j, _) in f.col(i) {
            if target.space.degree(*j) != source.space.degree(i) {
                return Err(precondition("map is not of degree 0"));
            }
        }
        if target.apply(f.col(i)) != f.apply(&source.diff[i]) {
            return Err(precondition("map is not closed"));
        }
    }
    let mut basis: Vec<(String, i64)> = target.space.basis.clone();
    basis.extend(source.space.basis.iter().map(|(l, d)| (format!("{l}[1]"), d - 1)));
    let mut diff = target.diff.clone();
    for i in 0..ns {
        let mut col = f.col(i).clone();
        col.extend(source.diff[i].iter().map(|(j, c)| (j + nt, -c)));
        diff.push(col);
    }
    let cone = Complex::new(crate::linalg::GradedSpace { field, basis }, diff)?;
    Ok(cone.is_acyclic())
}
