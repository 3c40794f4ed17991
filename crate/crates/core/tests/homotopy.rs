use std::sync::Arc;

use dgcat::dgbimod::{hom_differential, DgBimodule};
use dgcat::homotopy::{
    cohomology, gaussian_reduce, hom_cohomology_dim, homotopy_equivalent, is_acyclic_bimodule, is_acyclic_object,
    is_quasi_isomorphism, null_homotopy_witness, EquivOptions, Verdict,
};
use dgcat::linalg::{Field, SparseMatrix};
use dgcat::twisted::{cone, Ambient, TwistedComplex, TwistedMorphism};
use dgcat::zoo::{acyclic_dual_numbers, ks_complex, trivial_space, two_term_space, zigzag_ambient, BraidWord, ZigzagAmbient};
use proptest::prelude::*;

const Q: Field = Field::Rationals;

fn word(za: &ZigzagAmbient, letters: &[i64]) -> TwistedComplex {
    ks_complex(za, &BraidWord::new(za.n(), letters.to_vec()).unwrap()).unwrap()
}

fn equivalent(za: &ZigzagAmbient, a: &[i64], b: &[i64]) -> Verdict {
    homotopy_equivalent(&za.ambient, &word(za, a), &word(za, b), &EquivOptions::default()).unwrap()
}

#[test]
fn cone_of_identity_reduces_to_zero() {
    let za = zigzag_ambient(2, Q).unwrap();
    let amb = &za.ambient;
    let t1 = za.t(1).unwrap();
    let id = TwistedMorphism::identity(amb, &t1).unwrap();
    let c = cone(amb, &id).unwrap().cone;
    let (r, cert) = gaussian_reduce(amb, &c).unwrap();
    assert!(r.is_empty());
    assert_eq!(cert.target.dim(), 0);
    assert!(cert.verify().passed);
    let (acyclic, h) = is_acyclic_object(amb, &c).unwrap();
    assert!(acyclic);
    let h = h.unwrap();
    assert_eq!(h.d(amb).unwrap().matrix, SparseMatrix::identity(c.tot(amb).unwrap().dim(), Q));
}

#[test]
fn inverse_pair_reduces_to_identity() {
    let za = zigzag_ambient(2, Q).unwrap();
    let amb = &za.ambient;
    for letters in [[1, -1], [-1, 1], [2, -2], [-2, 2]] {
        let (r, cert) = gaussian_reduce(amb, &word(&za, &letters)).unwrap();
        assert_eq!(r, TwistedComplex::identity(za.z), "{letters:?}");
        assert!(cert.verify().passed);
        assert!(equivalent(&za, &letters, &[]).is_equivalent());
    }
}

#[test]
fn reduction_is_idempotent() {
    let za = zigzag_ambient(2, Q).unwrap();
    let amb = &za.ambient;
    let (r, _) = gaussian_reduce(amb, &word(&za, &[1, 2, 1])).unwrap();
    let (r2, cert) = gaussian_reduce(amb, &r).unwrap();
    assert_eq!(r, r2);
    assert_eq!(cert.f, SparseMatrix::identity(cert.source.dim(), Q));
}

#[test]
fn braid_relation_over_two_and_three_vertices() {
    for n in [2, 3] {
        let za = zigzag_ambient(n, Q).unwrap();
        for i in 1..n as i64 {
            let v = equivalent(&za, &[i, i + 1, i], &[i + 1, i, i + 1]);
            let Verdict::Equivalent(c) = v else { panic!("braid relation fails for n = {n}, i = {i}") };
            assert!(c.verify().passed);
        }
    }
}

#[test]
fn braid_relation_over_a_prime_field() {
    let za = zigzag_ambient(2, Field::prime(3).unwrap()).unwrap();
    assert!(equivalent(&za, &[1, 2, 1], &[2, 1, 2]).is_equivalent());
    assert!(equivalent(&za, &[-1, -2, -1], &[-2, -1, -2]).is_equivalent());
}

#[test]
fn distant_generators_commute() {
    let za = zigzag_ambient(4, Q).unwrap();
    assert!(equivalent(&za, &[1, 3], &[3, 1]).is_equivalent());
    assert!(equivalent(&za, &[-1, 3], &[3, -1]).is_equivalent());
}

#[test]
fn generator_is_not_the_identity() {
    let za = zigzag_ambient(2, Q).unwrap();
    assert!(matches!(equivalent(&za, &[1], &[]), Verdict::NotEquivalent(_)));
    assert!(matches!(equivalent(&za, &[1], &[-1]), Verdict::NotEquivalent(_)));
    assert!(matches!(equivalent(&za, &[1, 2], &[2, 1]), Verdict::NotEquivalent(_)));
}

#[test]
fn acyclic_dual_numbers_are_contracted_by_x() {
    let d = Arc::new(acyclic_dual_numbers(Q));
    let m = Arc::new(DgBimodule::regular(d.clone()));
    let x = d.index_of("x").unwrap();
    let lx = m.left_action(x).clone();
    assert_eq!(hom_differential(&m, &m, -1, &lx), SparseMatrix::identity(2, Q));
    assert!(is_acyclic_bimodule(&m).unwrap().is_some());

    let mut amb = Ambient::new(Q);
    let o = amb.add_object("D", d);
    let (acyclic, h) = is_acyclic_object(&amb, &TwistedComplex::identity(o)).unwrap();
    assert!(acyclic);
    assert_eq!(h.unwrap().d(&amb).unwrap().matrix, SparseMatrix::identity(2, Q));
}

#[test]
fn null_homotopies_exist_only_for_boundaries() {
    let za = zigzag_ambient(2, Q).unwrap();
    let amb = &za.ambient;
    let t1 = za.t(1).unwrap();
    let id = TwistedMorphism::identity(amb, &t1).unwrap();
    assert!(null_homotopy_witness(amb, &id).unwrap().is_none());
    let z = TwistedMorphism::zero(amb, &t1, &t1, 0).unwrap();
    assert!(null_homotopy_witness(amb, &z).unwrap().is_some());
}

#[test]
fn quasi_isomorphisms_of_complexes() {
    let v = two_term_space(Q, true);
    let w = two_term_space(Q, false);
    let zero = trivial_space(Q, 0);
    let to_zero = SparseMatrix::zero(0, 2, Q);
    assert!(is_quasi_isomorphism(&v, &zero, &to_zero).unwrap());
    assert!(!is_quasi_isomorphism(&w, &zero, &to_zero).unwrap());
    let id = SparseMatrix::identity(2, Q);
    assert!(is_quasi_isomorphism(&w, &w, &id).unwrap());
    assert_eq!(cohomology(&w, -1).unwrap().0, 1);
    assert_eq!(cohomology(&v, 0).unwrap().0, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reduction_certificates_verify(letters in prop::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)], 0..4)) {
        let za = zigzag_ambient(2, Q).unwrap();
        let amb = &za.ambient;
        let x = word(&za, &letters);
        let (r, cert) = gaussian_reduce(amb, &x).unwrap();
        prop_assert!(cert.verify().passed);
        prop_assert!(r.len() <= x.len());
        prop_assert!(r.mc_check(amb).unwrap().passed);
        // End cohomology is a homotopy invariant
        let (a, b) = (&cert.source, &cert.target);
        for d in -2..=2 {
            prop_assert_eq!(hom_cohomology_dim(a, a, d).unwrap(), hom_cohomology_dim(b, b, d).unwrap());
        }
    }

    #[test]
    fn word_times_inverse_is_trivial(letters in prop::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)], 1..3)) {
        let za = zigzag_ambient(2, Q).unwrap();
        let mut w = letters.clone();
        w.extend(letters.iter().rev().map(|l| -l));
        prop_assert!(equivalent(&za, &w, &[]).is_equivalent());
    }
}
