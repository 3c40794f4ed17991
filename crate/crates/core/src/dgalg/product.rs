use std::collections::HashSet;

use super::DgAlgebra;
use crate::error::{mismatch, structural, Result};
use crate::linalg::{GradedSpace, SparseVec};

/// `A_1 × ... × A_n`, block diagonal. Labels are kept when they are unique
/// across factors and prefixed by the factor index otherwise.
pub fn product_algebra(factors: &[DgAlgebra]) -> Result<DgAlgebra> {
    let Some(first) = factors.first() else {
        return Err(structural("empty product"));
    };
    if factors.len() == 1 {
        return Ok(first.clone());
    }
    let field = first.field();
    if factors.iter().any(|a| a.field() != field) {
        return Err(mismatch("factors over different fields"));
    }
    let mut seen = HashSet::new();
    let unique = factors
        .iter()
        .flat_map(|a| a.space.basis.iter().map(|b| b.0.clone()))
        .all(|l| seen.insert(l));
    let mut basis = Vec::new();
    let mut unit = Vec::new();
    let mut mult = Vec::new();
    let mut diff = Vec::new();
    let mut idempotents: Vec<SparseVec> = Vec::new();
    let mut generators = Vec::new();
    let mut block = Vec::new();
    let (mut off, mut eoff) = (0, 0);
    for (f, a) in factors.iter().enumerate() {
        for (l, d) in &a.space.basis {
            let label = if unique { l.clone() } else { format!("{f}.{l}") };
            basis.push((label, *d));
        }
        unit.extend(a.unit.iter().map(|(i, c)| (i + off, c.clone())));
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                for (k, c) in &a.mult[i][j] {
                    mult.push((i + off, j + off, k + off, c.clone()));
                }
            }
            for (j, c) in &a.diff[i] {
                diff.push((i + off, j + off, c.clone()));
            }
            let (u, v) = a.block[i];
            block.push((u + eoff, v + eoff));
        }
        for e in &a.idempotents {
            idempotents.push(e.iter().map(|(i, c)| (i + off, c.clone())).collect());
        }
        generators.extend(a.generators.iter().map(|g| g + off));
        off += a.dim();
        eoff += a.idempotents.len();
    }
    let name = factors.iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join("x");
    let space = GradedSpace::new(field, basis)?;
    let alg = DgAlgebra::new(name, space, unit, mult, diff)?;
    Ok(DgAlgebra { idempotents, block, ..alg }.with_generators(generators))
}

/// Units of the factors of a product, as elements of the product.
pub fn central_idempotents(factors: &[DgAlgebra]) -> Vec<SparseVec> {
    let mut off = 0;
    let mut out = Vec::new();
    for a in factors {
        out.push(a.unit.iter().map(|(i, c)| (i + off, c.clone())).collect());
        off += a.dim();
    }
    out
}

/// `A ⊗ B` with `(a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'`. A one-dimensional
/// ground-field factor is absorbed, so `A ⊗ k` is `A` itself.
pub fn tensor_algebra(a: &DgAlgebra, b: &DgAlgebra) -> Result<DgAlgebra> {
    if a.field() != b.field() {
        return Err(mismatch("factors over different fields"));
    }
    if b.is_ground_field() {
        return Ok(a.clone());
    }
    if a.is_ground_field() {
        return Ok(b.clone());
    }
    let field = a.field();
    let (n, m) = (a.dim(), b.dim());
    let idx = |i: usize, j: usize| i * m + j;
    let mut basis = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            basis.push((format!("{}⊗{}", a.label(i), b.label(j)), a.degree(i) + b.degree(j)));
        }
    }
    let mut mult = Vec::new();
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                for l in 0..m {
                    let s = field.sign(b.degree(j) * a.degree(k));
                    for (p, c) in &a.mult[i][k] {
                        for (q, d) in &b.mult[j][l] {
                            mult.push((idx(i, j), idx(k, l), idx(*p, *q), &s * &(c * d)));
                        }
                    }
                }
            }
        }
    }
    let mut diff = Vec::new();
    for i in 0..n {
        for j in 0..m {
            for (p, c) in &a.diff[i] {
                diff.push((idx(i, j), idx(*p, j), c.clone()));
            }
            let s = field.sign(a.degree(i));
            for (q, d) in &b.diff[j] {
                diff.push((idx(i, j), idx(i, *q), &s * d));
            }
        }
    }
    let mut unit = Vec::new();
    for (i, c) in &a.unit {
        for (j, d) in &b.unit {
            unit.push((idx(*i, *j), c * d));
        }
    }
    let space = GradedSpace::new(field, basis)?;
    let alg = DgAlgebra::new(format!("{}⊗{}", a.name, b.name), space, unit, mult, diff)?;
    let mut idempotents = Vec::new();
    for e in &a.idempotents {
        for f in &b.idempotents {
            let mut v = Vec::new();
            for (i, c) in e {
                for (j, d) in f {
                    v.push((idx(*i, *j), c * d));
                }
            }
            idempotents.push(crate::linalg::sparse::collect_terms(v));
        }
    }
    let nb = b.idempotents.len();
    let block = (0..n * m)
        .map(|k| {
            let ((u, v), (s, t)) = (a.block[k / m], b.block[k % m]);
            (u * nb + s, v * nb + t)
        })
        .collect();
    let one_a = a.unit.iter().map(|(i, _)| *i).collect::<Vec<_>>();
    let one_b = b.unit.iter().map(|(j, _)| *j).collect::<Vec<_>>();
    // generators g ⊗ e and e ⊗ h, e running over idempotent basis elements
    let mut generators = Vec::new();
    for &g in &a.generators {
        for &j in &one_b {
            generators.push(idx(g, j));
        }
    }
    for &h in &b.generators {
        for &i in &one_a {
            generators.push(idx(i, h));
        }
    }
    generators.sort();
    generators.dedup();
    Ok(DgAlgebra { idempotents, block, ..alg }.with_generators(generators))
}
