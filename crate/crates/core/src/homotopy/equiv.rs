use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cert::Certificate;
use super::{closed_maps, cohomology_representatives, hom_cohomology_dim, reduce::gaussian_reduce, solve_boundary};
use crate::dgbimod::{degree_range, hom_differential, DgBimodule, HomSpace};
use crate::error::{mismatch, Result};
use crate::linalg::sparse::solve_columns;
use crate::linalg::SparseMatrix;
use crate::twisted::{Ambient, TwistedComplex};

#[derive(Clone, Debug)]
pub struct EquivOptions {
    pub seed: u64,
    /// Random combinations of cohomology classes tried after the classes themselves.
    pub random_candidates: usize,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions { seed: 0, random_candidates: 64 }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// A verified certificate between the totals of the two inputs.
    Equivalent(Box<Certificate>),
    /// An invariant that differs, as a sentence.
    NotEquivalent(String),
    /// No invariant separates them and no equivalence was found.
    Unknown,
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

/// Decides whether two twisted complexes are homotopy equivalent.
///
/// Both sides are reduced first. Cohomology of the endomorphism and Hom
/// complexes is compared degree by degree; if it agrees, closed degree-0 maps
/// are tried as candidates and a homotopy inverse is solved for linearly.
pub fn homotopy_equivalent(amb: &Ambient, x: &TwistedComplex, y: &TwistedComplex, opts: &EquivOptions) -> Result<Verdict> {
    if x.source != y.source || x.target != y.target {
        return Err(mismatch("complexes between different objects"));
    }
    let (_, cx) = gaussian_reduce(amb, x)?;
    let (_, cy) = gaussian_reduce(amb, y)?;
    let (mx, my) = (cx.target.clone(), cy.target.clone());

    if let Some(reason) = obstruction(&mx, &my)? {
        return Ok(Verdict::NotEquivalent(reason));
    }
    let Some(c) = find_equivalence(&mx, &my, opts)? else { return Ok(Verdict::Unknown) };
    let full = cx.then(&c)?.then(&cy.inverse())?;
    if !full.verify().passed {
        return Ok(Verdict::Unknown);
    }
    Ok(Verdict::Equivalent(Box::new(full)))
}

fn obstruction(mx: &DgBimodule, my: &DgBimodule) -> Result<Option<String>> {
    let ranges = [degree_range(mx, mx), degree_range(my, my), degree_range(mx, my)];
    let lo = ranges.iter().map(|r| r.0).min().unwrap();
    let hi = ranges.iter().map(|r| r.1).max().unwrap();
    for d in lo..=hi {
        let ex = hom_cohomology_dim(mx, mx, d)?;
        let ey = hom_cohomology_dim(my, my, d)?;
        if ex != ey {
            return Ok(Some(format!("endomorphism cohomology differs in degree {d}: {ex} vs {ey}")));
        }
        let h = hom_cohomology_dim(mx, my, d)?;
        if h != ex {
            return Ok(Some(format!("Hom cohomology in degree {d} is {h}, endomorphisms have {ex}")));
        }
    }
    Ok(None)
}

/// A certificate between two dg bimodules built from candidate closed maps.
pub(crate) fn find_equivalence(mx: &DgBimodule, my: &DgBimodule, opts: &EquivOptions) -> Result<Option<Certificate>> {
    let field = mx.field();
    if mx.dim() == 0 && my.dim() == 0 {
        let z = SparseMatrix::zero(0, 0, field);
        let mut c = Certificate::identity(std::sync::Arc::new(mx.clone()));
        c.target = std::sync::Arc::new(my.clone());
        c.f = z.clone();
        c.g = z;
        return Ok(Some(c));
    }
    let reps = cohomology_representatives(mx, my, 0)?;
    if reps.is_empty() {
        return Ok(None);
    }
    let back = closed_maps(my, mx, 0)?;
    let end0 = HomSpace::new(mx, mx, 0)?;
    let homot = HomSpace::new(mx, mx, -1)?.elements();
    let boundaries: Vec<_> = homot
        .iter()
        .map(|h| end0.coords(&-&hom_differential(mx, mx, -1, h)).expect("boundary is a bimodule map"))
        .collect();
    let id = SparseMatrix::identity(mx.dim(), field);
    let id_c = end0.coords(&id).expect("identity is a bimodule map");

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut candidates: Vec<SparseMatrix> = reps.clone();
    for _ in 0..opts.random_candidates {
        let mut f = SparseMatrix::zero(my.dim(), mx.dim(), field);
        for r in &reps {
            let c = field.from_i64(rng.gen_range(-3..=3));
            f = &f + &r.scaled(&c);
        }
        candidates.push(f);
    }

    for f in candidates {
        if f.is_zero() {
            continue;
        }
        let mut cols: Vec<_> = back
            .iter()
            .map(|g| end0.coords(&(g * &f)).expect("composite is a bimodule map"))
            .collect();
        cols.extend(boundaries.iter().cloned());
        let Some(sol) = solve_columns(&cols, end0.dim(), &id_c, field) else { continue };
        let mut g = SparseMatrix::zero(mx.dim(), my.dim(), field);
        let mut h = SparseMatrix::zero(mx.dim(), mx.dim(), field);
        for (j, c) in sol {
            if j < back.len() {
                g = &g + &back[j].scaled(&c);
            } else {
                h = &h + &homot[j - back.len()].scaled(&c);
            }
        }
        let fg = &(&f * &g) - &SparseMatrix::identity(my.dim(), field);
        let Some(k) = solve_boundary(my, my, 0, &fg)? else { continue };
        let c = Certificate {
            source: std::sync::Arc::new(mx.clone()),
            target: std::sync::Arc::new(my.clone()),
            f,
            g,
            h_src: h,
            h_tgt: k,
        };
        if c.verify().passed {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
