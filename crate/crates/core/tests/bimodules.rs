use std::sync::Arc;

use dgcat::dgalg::DgAlgebra;
use dgcat::dgbimod::{cokernel, hom_complex, multi_tensor, split_idempotent, tensor_over_algebra, tensor_over_k, BimoduleMap, DgBimodule, HomSpace};
use dgcat::linalg::{Field, Scalar, SparseMatrix};
use dgcat::zoo::{acyclic_dual_numbers, matrix_dg_algebra, matrix_module, projective_pair, tian_quotient, two_term_space, zigzag};
use proptest::prelude::*;

const Q: Field = Field::Rationals;

fn z2() -> Arc<DgAlgebra> {
    Arc::new(zigzag(2, Q).unwrap())
}

/// `A e_i ⊗_k e_i A`.
fn p(a: &Arc<DgAlgebra>, i: usize) -> Arc<DgBimodule> {
    let (ae, ea) = projective_pair(a, i).unwrap();
    Arc::new(tensor_over_k(&ae, &ea).unwrap())
}

fn sign_diag(m: &DgBimodule, f: impl Fn(i64) -> i64) -> SparseMatrix {
    let t = (0..m.dim()).map(|i| (i, i, Q.sign(f(m.degree(i))))).collect();
    SparseMatrix::from_triples(m.dim(), m.dim(), Q, t)
}

#[test]
fn regular_bimodules_pass() {
    for a in [z2(), Arc::new(acyclic_dual_numbers(Q))] {
        let r = DgBimodule::regular(a.clone());
        assert!(r.check().passed, "{}", r.check());
        assert!(DgBimodule::left_regular(a.clone()).check().passed);
        assert!(DgBimodule::right_regular(a).check().passed);
    }
}

#[test]
fn projective_bimodule_over_zigzag() {
    let z = z2();
    let (ae, ea) = projective_pair(&z, 0).unwrap();
    assert_eq!(ae.dim(), 3);
    assert_eq!(ea.dim(), 3);
    let p1 = p(&z, 0);
    assert_eq!(p1.dim(), 9);
    assert!(p1.check().passed, "{}", p1.check());
}

#[test]
fn broken_action_is_reported() {
    let (_, m) = tian_quotient(Q).unwrap();
    assert!(m.check().passed);
    let (l, r, d) = m.tables();
    // drop the left action of e_x on the odd generator
    let l: Vec<_> = l.into_iter().filter(|t| t.1 != 1).collect();
    assert!(DgBimodule::new(m.left_algebra().clone(), m.right_algebra().clone(), m.space().clone(), l, r, d).is_err());
}

#[test]
fn shift_keeps_axioms_and_moves_degrees() {
    let p1 = p(&z2(), 0);
    let d = Arc::new(acyclic_dual_numbers(Q));
    let reg = DgBimodule::regular(d);
    for k in [-2, -1, 1, 3] {
        let s = p1.shift(k);
        assert!(s.check().passed);
        assert_eq!(s.degree(0), p1.degree(0) - k);
        let t = reg.shift(k);
        assert!(t.check().passed, "shift {k}: {}", t.check());
    }
}

#[test]
fn dual_negates_degrees_and_passes() {
    let d = Arc::new(acyclic_dual_numbers(Q));
    let reg = DgBimodule::regular(d);
    let dual = reg.dual();
    assert!(dual.check().passed, "{}", dual.check());
    let mut degs: Vec<i64> = (0..dual.dim()).map(|i| dual.degree(i)).collect();
    degs.sort();
    assert_eq!(degs, vec![0, 1]);
    let p1 = p(&z2(), 1);
    assert!(p1.dual().check().passed);
}

#[test]
fn double_dual_is_isomorphic_by_a_sign() {
    let d = Arc::new(acyclic_dual_numbers(Q));
    for m in [DgBimodule::regular(d.clone()).shift(1), tensor_over_k(&DgBimodule::regular(d.clone()), &DgBimodule::regular(d)).unwrap()] {
        let dd = Arc::new(m.dual().dual());
        let m = Arc::new(m);
        let f = BimoduleMap::new(m.clone(), dd, 0, sign_diag(&m, |d| d));
        assert!(f.is_bimodule_map());
        assert!(f.is_closed());
    }
}

/// Center of an algebra by brute force over its tables.
fn center_dim(a: &DgAlgebra) -> usize {
    let n = a.dim();
    let mut rows = Vec::new();
    for b in 0..n {
        for k in 0..n {
            let get = |v: &Vec<(usize, Scalar)>| v.iter().find(|t| t.0 == k).map(|t| t.1.clone()).unwrap_or(Q.zero());
            rows.push((0..n).map(|x| &get(a.mul_basis(x, b)) - &get(a.mul_basis(b, x))).collect());
        }
    }
    n - dgcat::linalg::Matrix::from_rows(rows, n, Q).rank()
}

#[test]
fn bimodule_endomorphisms_of_regular_are_the_center() {
    for n in 2..=3 {
        let z = Arc::new(zigzag(n, Q).unwrap());
        let r = Arc::new(DgBimodule::regular(z.clone()));
        let h = HomSpace::new(&r, &r, 0).unwrap();
        assert_eq!(h.dim(), center_dim(&z));
        for f in h.elements() {
            assert!(BimoduleMap::new(r.clone(), r.clone(), 0, f).is_bimodule_map());
        }
    }
}

#[test]
fn hom_complex_of_acyclic_regular_is_acyclic() {
    let d = Arc::new(acyclic_dual_numbers(Q));
    let r = Arc::new(DgBimodule::regular(d));
    let h = hom_complex(&r, &r).unwrap();
    let c = h.complex().unwrap();
    assert!(c.squares_to_zero());
    for n in -2..=2 {
        assert_eq!(h.cohomology_dim(n).unwrap(), 0);
    }
}

#[test]
fn hom_between_shifts() {
    let p1 = p(&z2(), 0);
    let a = Arc::new(p1.shift(1));
    let h = hom_complex(&p1, &a).unwrap();
    let h0 = hom_complex(&p1, &p1).unwrap();
    assert_eq!(h.dims().get(&-1), h0.dims().get(&0));
}

#[test]
fn tensor_over_algebra_is_unital() {
    let z = z2();
    let p1 = p(&z, 0);
    let r = Arc::new(DgBimodule::regular(z));
    let left = tensor_over_algebra(&r, &p1).unwrap();
    let right = tensor_over_algebra(&p1, &r).unwrap();
    assert_eq!(left.dim(), 9);
    assert_eq!(right.dim(), 9);
    assert!(left.check().passed);
    assert!(right.check().passed);
}

#[test]
fn square_of_projective_bimodule() {
    let z = z2();
    let p1 = p(&z, 0);
    let pp = multi_tensor(&[p1.clone(), p1]).unwrap();
    assert_eq!(pp.module.dim(), 18);
    assert!(pp.module.check().passed, "{}", pp.module.check());
}

#[test]
fn tensor_with_odd_generator_squares_correctly() {
    let (r, m) = tian_quotient(Q).unwrap();
    let mm = tensor_over_algebra(&m, &m).unwrap();
    assert_eq!(mm.dim(), 2);
    assert!(mm.check().passed);
    let mut degs: Vec<i64> = (0..2).map(|i| mm.degree(i)).collect();
    degs.sort();
    assert_eq!(degs, vec![-1, -1]);
    assert_eq!(r.dim(), 2);
}

#[test]
fn cokernel_of_multiplication() {
    let z = z2();
    let (ae, ea) = projective_pair(&z, 0).unwrap();
    let p1 = Arc::new(tensor_over_k(&ae, &ea).unwrap());
    let r = Arc::new(DgBimodule::regular(z.clone()));
    // x ⊗ y ↦ xy, with x and y read back in the algebra basis by label
    let mut triples = Vec::new();
    for i in 0..ae.dim() {
        for j in 0..ea.dim() {
            let x = z.index_of(ae.label(i)).unwrap();
            let y = z.index_of(ea.label(j)).unwrap();
            for (k, c) in z.mul_basis(x, y) {
                triples.push((*k, i * ea.dim() + j, c.clone()));
            }
        }
    }
    let mu = BimoduleMap::new(p1.clone(), r, 0, SparseMatrix::from_triples(6, 9, Q, triples));
    assert!(mu.is_bimodule_map());
    assert!(mu.is_closed());
    let (c, proj) = cokernel(&mu).unwrap();
    assert_eq!(c.dim(), 1);
    assert_eq!(c.label(0), "e2");
    assert!(c.check().passed);
    assert!(proj.is_bimodule_map());
    assert!((&proj.matrix * &mu.matrix).is_zero());
}

#[test]
fn split_idempotent_on_a_sum() {
    let z = z2();
    let p1 = p(&z, 0);
    let s = Arc::new(DgBimodule::direct_sum(&[(&p1, 0), (&p1, 1)], z.clone(), z).unwrap());
    assert!(s.check().passed);
    let n = p1.dim();
    let e = SparseMatrix::from_triples(2 * n, 2 * n, Q, (0..n).map(|i| (i, i, Q.one())).collect());
    let e = BimoduleMap::new(s.clone(), s, 0, e);
    let (img, i, pr) = split_idempotent(&e).unwrap();
    assert_eq!(img.dim(), 9);
    assert!(img.check().passed);
    assert_eq!(&pr.matrix * &i.matrix, SparseMatrix::identity(9, Q));
    assert_eq!(&i.matrix * &pr.matrix, e.matrix);
    assert!(i.is_bimodule_map() && pr.is_bimodule_map());
}

#[test]
fn matrix_module_and_its_dual() {
    for iso in [false, true] {
        let v = two_term_space(Q, iso);
        let a = Arc::new(matrix_dg_algebra(&v).unwrap());
        let x = matrix_module(a, &v).unwrap();
        assert!(x.check().passed, "{}", x.check());
        let y = Arc::new(x.dual());
        assert!(y.check().passed);
        let x = Arc::new(x);
        assert_eq!(tensor_over_algebra(&y, &x).unwrap().dim(), 1);
        assert_eq!(tensor_over_algebra(&x, &y).unwrap().dim(), 4);
    }
}

#[test]
fn tensor_over_k_of_dual_numbers() {
    let d = Arc::new(acyclic_dual_numbers(Q));
    let r = DgBimodule::regular(d);
    let t = tensor_over_k(&r, &r).unwrap();
    assert_eq!(t.dim(), 4);
    assert!(t.check().passed, "{}", t.check());
}

fn sample(k: usize) -> DgBimodule {
    let d = Arc::new(acyclic_dual_numbers(Q));
    match k {
        0 => (*p(&z2(), 0)).clone(),
        1 => DgBimodule::regular(d),
        2 => (*tian_quotient(Q).unwrap().1).clone(),
        _ => DgBimodule::regular(d).dual(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shifts_and_duals_preserve_axioms(k in 0usize..4, s in -3i64..4) {
        let m = sample(k);
        prop_assert!(m.shift(s).check().passed);
        prop_assert!(m.shift(s).dual().check().passed);
        let a: Vec<i64> = (0..m.dim()).map(|i| m.shift(s).dual().degree(i)).collect();
        let b: Vec<i64> = (0..m.dim()).map(|i| m.dual().shift(-s).degree(i)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn hom_dimensions_are_shift_invariant(k in 0usize..4, s in -2i64..3) {
        let m = Arc::new(sample(k));
        let ms = Arc::new(m.shift(s));
        let h = hom_complex(&m, &m).unwrap();
        let hs = hom_complex(&ms, &ms).unwrap();
        prop_assert_eq!(h.dims(), hs.dims());
        let c = hs.complex().unwrap();
        prop_assert!(c.squares_to_zero());
    }
}
