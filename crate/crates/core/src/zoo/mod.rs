//! The worked examples: zigzag algebras and braid complexes, the ℤ[i]
//! quotient data, matrix dg algebras and the acyclic dual numbers.

mod braid;



use std::sync::Arc;

use crate::dgalg::{path_algebra, path_through, product_algebra, Arrow, DgAlgebra, Path, PathAlgebraOptions, Quiver};
use crate::dgbimod::{split_idempotent, BimoduleMap, DgBimodule};
use crate::error::{precondition, Result};
use crate::linalg::{Complex, Field, GradedSpace, SparseMatrix};

pub use braid::{coevaluation, ks_complex, zigzag_ambient, BraidWord, ZigzagAmbient};



/// The zigzag quiver on `n` vertices: arrows `i → i+1` then `i+1 → i`.
pub fn zigzag_quiver(n: usize) -> Quiver {
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 0..n - 1 {
        arrows.push(Arrow { name: format!("a{}", i + 1), source: i, target: i + 1, degree: 0 });
    }
    for i in 0..n - 1 {
        arrows.push(Arrow { name: format!("b{}", i + 1), source: i + 1, target: i, degree: 0 });
    }
    Quiver { vertices, arrows }
}

/// The symmetric zigzag algebra on `n ≥ 2` vertices, trivially graded.
pub fn zigzag(n: usize, field: Field) -> Result<DgAlgebra> {
    if n < 2 {
        return Err(precondition("zigzag algebras need at least two vertices"));
    }
    let q = zigzag_quiver(n);
    let one = field.one();
    let mut rels = Vec::new();
    for i in 0..n.saturating_sub(2) {
        rels.push(vec![(path_through(&q, &[i, i + 1, i + 2]).unwrap(), one.clone())]);
        rels.push(vec![(path_through(&q, &[i + 2, i + 1, i]).unwrap(), one.clone())]);
    }
    for i in 1..n - 1 {
        rels.push(vec![
            (path_through(&q, &[i, i - 1, i]).unwrap(), one.clone()),
            (path_through(&q, &[i, i + 1, i]).unwrap(), -one.clone()),
        ]);
    }
    // every path of length three vanishes
    for a in 0..q.arrows.len() {
        for b in 0..q.arrows.len() {
            for c in 0..q.arrows.len() {
                let (x, y, z) = (&q.arrows[a], &q.arrows[b], &q.arrows[c]);
                if x.target == y.source && y.target == z.source {
                    rels.push(vec![(Path { start: x.source, arrows: vec![a, b, c] }, one.clone())]);
                }
            }
        }
    }
    let opts = PathAlgebraOptions { name: format!("Z{n}"), ..Default::default() };
    path_algebra(&q, &rels, field, &opts)
}

/// Basis index of the loop `X_i` spanning the socle at vertex `i` (0-based).
pub fn zigzag_loop(z: &DgAlgebra, i: usize) -> usize {
    (0..z.dim())
        .find(|&b| z.block(b) == (i, i) && z.label(b).matches('|').count() == 2)
        .expect("zigzag loop")
}

/// `k[x]/(x²)` with `|x| = degree` and zero differential.
pub fn dual_numbers(field: Field, degree: i64) -> DgAlgebra {
    let space = GradedSpace { field, basis: vec![("1".into(), 0), ("x".into(), degree)] };
    let one = field.one();
    let mult = vec![(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone())];
    DgAlgebra::new(format!("k[x]/x2({degree})"), space, vec![(0, one)], mult, vec![]).unwrap()
}

/// `D = k[x]/(x²)` with `|x| = -1` and `∂x = 1`.
pub fn acyclic_dual_numbers(field: Field) -> DgAlgebra {
    let space = GradedSpace { field, basis: vec![("1".into(), 0), ("x".into(), -1)] };
    let one = field.one();
    let mult = vec![(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone())];
    DgAlgebra::new("D", space, vec![(0, one.clone())], mult, vec![(1, 0, one)]).unwrap()
}

/// The quotient data `R' = k e_x × k e_y` and the bimodule `M'` with a
/// degree-0 element in `e_y M' e_x` and a degree -1 element in `e_x M' e_y`.
pub fn tian_quotient(field: Field) -> Result<(Arc<DgAlgebra>, Arc<DgBimodule>)> {
    let r = Arc::new(
        product_algebra(&[
            DgAlgebra::ground_field_named(field, "e_x"),
            DgAlgebra::ground_field_named(field, "e_y"),
        ])?
        .with_name("R'"),
    );
    let (ex, ey) = (0, 1);
    let space = GradedSpace { field, basis: vec![("e_y⊗e_x".into(), 0), ("e_x⊗e_y[1]".into(), -1)] };
    let one = field.one();
    let left = vec![(ey, 0, 0, one.clone()), (ex, 1, 1, one.clone())];
    let right = vec![(0, ex, 0, one.clone()), (1, ey, 1, one)];
    let m = DgBimodule::new(r.clone(), r.clone(), space, left, right, vec![])?;
    Ok((r, Arc::new(m)))
}

/// `End_k(V)`, spanned by the elementary maps `v_i ⊗ v_j*: v_j ↦ v_i`, with
/// `∂f = d∘f - (-1)^{|f|} f∘d`.
pub fn matrix_dg_algebra(v: &Complex) -> Result<DgAlgebra> {
    let n = v.space.dim();
    if n == 0 {
        return Err(precondition("matrix algebra of the zero space"));
    }
    let field = v.field();
    let idx = |i: usize, j: usize| i * n + j;
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            basis.push((
                format!("{}⊗{}*", v.space.label(i), v.space.label(j)),
                v.space.degree(i) - v.space.degree(j),
            ));
        }
    }
    let mut mult = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                mult.push((idx(i, j), idx(j, l), idx(i, l), field.one()));
            }
        }
    }
    let mut diff = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s = field.sign(v.space.degree(i) - v.space.degree(j));
            // d∘E_ij = Σ_k d_{k i} E_kj
            for (k, c) in &v.diff[i] {
                diff.push((idx(i, j), idx(*k, j), c.clone()));
            }
            // E_ij∘d = Σ_l d_{j l} E_il, where d(v_l) contains d_{j l} v_j
            for l in 0..n {
                for (k, c) in &v.diff[l] {
                    if *k == j {
                        diff.push((idx(i, j), idx(i, l), -(&s * c)));
                    }
                }
            }
        }
    }
    let unit = (0..n).map(|i| (idx(i, i), field.one())).collect();
    DgAlgebra::new("End(V)", GradedSpace::new(field, basis)?, unit, mult, diff)
}

/// `V` as a left `End(V)`-module (an `End(V)`–`k`-bimodule).
pub fn matrix_module(a: Arc<DgAlgebra>, v: &Complex) -> Result<DgBimodule> {
    let n = v.space.dim();
    let field = v.field();
    let k = Arc::new(DgAlgebra::ground_field(field));
    let mut left = Vec::new();
    for i in 0..n {
        for j in 0..n {
            left.push((i * n + j, j, i, field.one()));
        }
    }
    let right = (0..n).map(|m| (m, 0, m, field.one())).collect();
    let diff = (0..n).flat_map(|j| v.diff[j].iter().map(move |(i, c)| (j, *i, c.clone()))).collect();
    DgBimodule::new(a, k, v.space.clone(), left, right, diff)
}

/// `A e_i` (as an `A`–`k`-bimodule) and `e_i A` (as a `k`–`A`-bimodule) for an
/// idempotent from the algebra's idempotent family.
pub fn projective_pair(a: &Arc<DgAlgebra>, i: usize) -> Result<(Arc<DgBimodule>, Arc<DgBimodule>)> {
    let field = a.field();
    let e = &a.idempotents()[i];
    let lr = Arc::new(DgBimodule::left_regular(a.clone()));
    let rr = Arc::new(DgBimodule::right_regular(a.clone()));
    let right_mult = SparseMatrix::from_columns(lr.dim(), field, (0..lr.dim()).map(|b| a.mul(&a.basis_vec(b), e)).collect());
    let left_mult = SparseMatrix::from_columns(rr.dim(), field, (0..rr.dim()).map(|b| a.mul(e, &a.basis_vec(b))).collect());
    let (ae, _, _) = split_idempotent(&BimoduleMap::new(lr.clone(), lr, 0, right_mult))?;
    let (ea, _, _) = split_idempotent(&BimoduleMap::new(rr.clone(), rr, 0, left_mult))?;
    Ok((ae, ea))
}

/// `V = k ⊕ k⟨1⟩`, optionally with the differential `k⟨1⟩ → k` the identity.
pub fn two_term_space(field: Field, with_iso: bool) -> Complex {
    let space = GradedSpace { field, basis: vec![("v0".into(), 0), ("v1".into(), -1)] };
    let diff = if with_iso { vec![vec![], vec![(0, field.one())]] } else { vec![vec![], vec![]] };
    Complex::new(space, diff).unwrap()
}

/// `k^n` concentrated in degree 0.
pub fn trivial_space(field: Field, n: usize) -> Complex {
    let space = GradedSpace::anonymous(field, "v", &vec![0; n]);
    Complex::new(space, vec![vec![]; n]).unwrap()
}
