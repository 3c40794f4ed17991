use std::collections::HashMap;
use std::sync::Arc;

use super::bimodule::DgBimodule;
use super::hom::BimoduleMap;
use crate::error::{precondition, Result};
use crate::linalg::sparse::Echelon;
use crate::linalg::{GradedSpace, SparseMatrix, SparseVec};

/// Cokernel of a closed degree-0 bimodule map, with the projection onto it.
///
/// The quotient basis consists of the target basis vectors that are not
/// pivots of the reduced image; the projection is reduction modulo the image.
pub fn cokernel(f: &BimoduleMap) -> Result<(Arc<DgBimodule>, BimoduleMap)> {
    if f.degree != 0 || !f.is_closed() {
        return Err(precondition("cokernel needs a closed degree-0 map"));
    }
    let n = &f.target;
    let field = n.field();
    let img = Echelon::from_rows(n.dim(), field, f.matrix.columns().iter().cloned());
    let keep = img.free_columns();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(q, &i)| (i, q)).collect();
    let project = |v: &SparseVec| -> SparseVec {
        img.reduce(v).into_iter().map(|(i, c)| (pos[&i], c)).collect()
    };
    let q = keep.len();
    let induced = |m: &SparseMatrix| {
        SparseMatrix::from_columns(q, field, keep.iter().map(|&i| project(m.col(i))).collect())
    };
    let space = GradedSpace {
        field,
        basis: keep.iter().map(|&i| (n.label(i).to_string(), n.degree(i))).collect(),
    };
    let module = Arc::new(DgBimodule {
        left: n.left.clone(),
        right: n.right.clone(),
        space,
        lact: n.lact.iter().map(induced).collect(),
        ract: n.ract.iter().map(induced).collect(),
        diff: induced(&n.diff),
        block: keep.iter().map(|&i| n.block(i)).collect(),
    });
    let proj = SparseMatrix::from_columns(q, field, (0..n.dim()).map(|i| project(&n.basis_vec(i))).collect());
    Ok((module.clone(), BimoduleMap::new(n.clone(), module, 0, proj)))
}

/// Image of a closed degree-0 idempotent `e`, with inclusion `i` and
/// projection `p` satisfying `p∘i = id` and `i∘p = e`.
pub fn split_idempotent(e: &BimoduleMap) -> Result<(Arc<DgBimodule>, BimoduleMap, BimoduleMap)> {
    if e.degree != 0 || !e.is_closed() {
        return Err(precondition("idempotent must be closed of degree 0"));
    }
    if !Arc::ptr_eq(&e.source, &e.target) && e.source != e.target {
        return Err(precondition("idempotent must be an endomorphism"));
    }
    if &e.matrix * &e.matrix != e.matrix {
        return Err(precondition("map is not idempotent"));
    }
    let m = &e.source;
    let field = m.field();
    let img = Echelon::from_rows(m.dim(), field, e.matrix.columns().iter().cloned());
    let rows = img.rows().to_vec();
    let pivots = img.pivots().to_vec();
    let k = rows.len();
    // coordinates of an image vector: its entries at the pivot columns
    let coords = |v: &SparseVec| -> SparseVec {
        let mut out = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            if let Ok(pos) = v.binary_search_by_key(&p, |t| t.0) {
                out.push((r, v[pos].1.clone()));
            }
        }
        out
    };
    let induced = |a: &SparseMatrix| SparseMatrix::from_columns(k, field, rows.iter().map(|r| coords(&a.apply(r))).collect());
    let space = GradedSpace {
        field,
        basis: pivots.iter().map(|&p| (m.label(p).to_string(), m.degree(p))).collect(),
    };
    let image = Arc::new(DgBimodule {
        left: m.left.clone(),
        right: m.right.clone(),
        space,
        lact: m.lact.iter().map(induced).collect(),
        ract: m.ract.iter().map(induced).collect(),
        diff: induced(&m.diff),
        block: pivots.iter().map(|&p| m.block(p)).collect(),
    });
    let incl = SparseMatrix::from_columns(m.dim(), field, rows.clone());
    let proj = SparseMatrix::from_columns(k, field, e.matrix.columns().iter().map(coords).collect());
    Ok((
        image.clone(),
        BimoduleMap::new(image.clone(), m.clone(), 0, incl),
        BimoduleMap::new(m.clone(), image, 0, proj),
    ))
}
