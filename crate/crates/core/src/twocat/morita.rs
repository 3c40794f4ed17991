use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::same;
use crate::dgalg::DgAlgebra;
use crate::dgbimod::{tensor_over_algebra, BimoduleMap, DgBimodule};
use crate::error::{mismatch, precondition, Result};
use crate::homotopy::closed_maps;
use crate::linalg::SparseMatrix;

/// Verdict of a Morita check with explicit witnesses.
#[derive(Clone, Debug)]
pub struct MoritaOutcome {
    pub equivalent: bool,
    /// `X ∘_B Y → A`.
    pub xy: Option<BimoduleMap>,
    /// `Y ∘_A X → B`.
    pub yx: Option<BimoduleMap>,
    pub reason: Option<String>,
}

fn graded_dims(m: &DgBimodule) -> Vec<(i64, usize)> {
    m.space().degrees().into_iter().map(|d| (d, m.space().dim_in_degree(d))).collect()
}

/// A closed degree-0 bimodule isomorphism `m → n`, searched among basis
/// elements of the closed maps and then seeded random combinations of them.
pub fn find_isomorphism(m: &Arc<DgBimodule>, n: &Arc<DgBimodule>, seed: u64, tries: usize) -> Result<Option<BimoduleMap>> {
    if graded_dims(m) != graded_dims(n) {
        return Ok(None);
    }
    let field = m.field();
    if m.dim() == 0 {
        return Ok(Some(BimoduleMap::zero(m.clone(), n.clone(), 0)));
    }
    let closed = closed_maps(m, n, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = closed.clone();
    for _ in 0..tries {
        let mut f = SparseMatrix::zero(n.dim(), m.dim(), field);
        for c in &closed {
            f = &f + &c.scaled(&field.from_i64(rng.gen_range(-3..=3)));
        }
        candidates.push(f);
    }
    Ok(candidates
        .into_iter()
        .find(|f| f.inverse().is_some())
        .map(|f| BimoduleMap::new(m.clone(), n.clone(), 0, f)))
}

/// Checks `X ∘_B Y ≅ A` and `Y ∘_A X ≅ B` for an `A`–`B`-bimodule `X` and a
/// `B`–`A`-bimodule `Y`. Graded dimensions are compared first.
pub fn morita_verify(
    a: &Arc<DgAlgebra>,
    b: &Arc<DgAlgebra>,
    x: &Arc<DgBimodule>,
    y: &Arc<DgBimodule>,
    seed: u64,
) -> Result<MoritaOutcome> {
    if !same(x.left_algebra(), a) || !same(x.right_algebra(), b) {
        return Err(mismatch("X must be an A–B-bimodule"));
    }
    if !same(y.left_algebra(), b) || !same(y.right_algebra(), a) {
        return Err(mismatch("Y must be a B–A-bimodule"));
    }
    for (name, m) in [("X", x), ("Y", y)] {
        let r = m.check();
        if !r.passed {
            return Err(precondition(format!("{name} is not a dg bimodule: {r}")));
        }
    }
    let no = |reason: String| MoritaOutcome { equivalent: false, xy: None, yx: None, reason: Some(reason) };
    let xy = Arc::new(tensor_over_algebra(x, y)?);
    let yx = Arc::new(tensor_over_algebra(y, x)?);
    let ra = Arc::new(DgBimodule::regular(a.clone()));
    let rb = Arc::new(DgBimodule::regular(b.clone()));
    if graded_dims(&xy) != graded_dims(&ra) {
        return Ok(no(format!("X∘Y has graded dimension {:?}, A has {:?}", graded_dims(&xy), graded_dims(&ra))));
    }
    if graded_dims(&yx) != graded_dims(&rb) {
        return Ok(no(format!("Y∘X has graded dimension {:?}, B has {:?}", graded_dims(&yx), graded_dims(&rb))));
    }
    let Some(f) = find_isomorphism(&xy, &ra, seed, 32)? else {
        return Ok(no("no closed isomorphism X∘Y → A found".into()));
    };
    let Some(g) = find_isomorphism(&yx, &rb, seed, 32)? else {
        return Ok(no("no closed isomorphism Y∘X → B found".into()));
    };
    Ok(MoritaOutcome { equivalent: true, xy: Some(f), yx: Some(g), reason: None })
}
