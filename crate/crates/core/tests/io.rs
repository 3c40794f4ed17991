use std::sync::Arc;

use dgcat::dgbimod::DgBimodule;
use dgcat::homotopy::{homotopy_equivalent, EquivOptions, Verdict};
use dgcat::io::{workspace_with_complex, Workspace};
use dgcat::linalg::Field;
use dgcat::zoo::{acyclic_dual_numbers, dual_numbers, ks_complex, tian_quotient, zigzag, zigzag_ambient, BraidWord};
use proptest::prelude::*;

const Q: Field = Field::Rationals;

fn round_trip(ws: &Workspace) -> String {
    let once = ws.to_json();
    let back = Workspace::from_json(&once).unwrap();
    let twice = back.to_json();
    assert_eq!(once, twice);
    once
}

#[test]
fn single_algebra_document() {
    let text = r#"{
        "field": "Q",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0}],
        "unit": [[0, "1"]],
        "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
        "diff": []
    }"#;
    let ws = Workspace::from_json(text).unwrap();
    let a = &ws.algebras["A"];
    assert_eq!(a.dim(), 2);
    assert!(a.check().passed);
    let reports = ws.check().unwrap();
    assert!(reports.iter().all(|(_, _, r)| r.passed));
}

#[test]
fn prime_field_and_fractions() {
    let text = r#"{"field": {"Fp": 5}, "basis": [{"name": "1", "degree": 0}], "unit": [[0, "1/2"]], "mult": [[0, 0, 0, "2"]]}"#;
    let ws = Workspace::from_json(text).unwrap();
    assert_eq!(ws.field, Field::PrimeField(5));
    assert!(ws.algebras["A"].check().passed);
    assert!(Workspace::from_json(r#"{"field": {"Fp": 6}, "basis": [], "unit": []}"#).is_err());
    assert!(Workspace::from_json(r#"{"field": "R", "basis": [], "unit": []}"#).is_err());
}

#[test]
fn broken_differential_is_parsed_then_fails_its_check() {
    // ∂x = y, ∂y = x gives ∂² ≠ 0
    let text = r#"{
        "field": "Q",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
        "unit": [[0, "1"]],
        "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [0, 2, 2, "1"], [2, 0, 2, "1"]],
        "diff": [[1, 2, "1"], [2, 1, "1"]]
    }"#;
    let ws = Workspace::from_json(text).unwrap();
    let reports = ws.check().unwrap();
    assert!(reports.iter().any(|(_, _, r)| !r.passed));
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(Workspace::from_json("{").is_err());
    let out_of_range = r#"{"field": "Q", "basis": [{"name": "1", "degree": 0}], "unit": [[3, "1"]]}"#;
    assert!(Workspace::from_json(out_of_range).is_err());
    let bad_coeff = r#"{"field": "Q", "basis": [{"name": "1", "degree": 0}], "unit": [[0, "one"]]}"#;
    assert!(Workspace::from_json(bad_coeff).is_err());
}

#[test]
fn zoo_algebras_round_trip() {
    let mut ws = Workspace::new(Q);
    for a in [zigzag(2, Q).unwrap(), zigzag(3, Q).unwrap(), dual_numbers(Q, 1), acyclic_dual_numbers(Q)] {
        ws.add_algebra(&Arc::new(a));
    }
    let (r, m) = tian_quotient(Q).unwrap();
    ws.add_algebra(&r);
    ws.add_bimodule("M'", &m);
    round_trip(&ws);
    let back = Workspace::from_json(&ws.to_json()).unwrap();
    for (n, a) in &ws.algebras {
        assert_eq!(**a, *back.algebras[n]);
    }
    assert_eq!(*back.bimodules["M'"], *m);
}

#[test]
fn alpha_with_k_not_below_l_is_rejected() {
    let za = zigzag_ambient(2, Q).unwrap();
    let x = za.t(1).unwrap();
    let ws = workspace_with_complex(&za.ambient, "T1", &x);
    let mut doc = ws.to_document();
    let c = doc.complexes.get_mut("T1").unwrap();
    assert_eq!(c.alpha.len(), 1);
    let a = &mut c.alpha[0];
    std::mem::swap(&mut a.k, &mut a.l);
    let text = serde_json::to_string(&doc).unwrap();
    let err = Workspace::from_json(&text).unwrap_err();
    assert!(err.to_string().contains("k < l"), "{err}");
}

#[test]
fn braid_complex_and_certificate_round_trip() {
    let za = zigzag_ambient(2, Q).unwrap();
    let w = BraidWord::new(2, vec![1, -1]).unwrap();
    let x = ks_complex(&za, &w).unwrap();
    let mut ws = workspace_with_complex(&za.ambient, "s1s1inv", &x);
    let id = dgcat::twisted::TwistedComplex::identity(za.z);
    let Verdict::Equivalent(cert) = homotopy_equivalent(&za.ambient, &x, &id, &EquivOptions::default()).unwrap() else {
        panic!("expected an equivalence")
    };
    ws.add_certificate("cert", &cert);
    let text = round_trip(&ws);
    let back = Workspace::from_json(&text).unwrap();
    assert_eq!(back.complexes["s1s1inv"], x);
    assert!(back.certificates["cert"].verify().passed);
    assert!(back.check().unwrap().iter().all(|(_, _, r)| r.passed));
}

#[test]
fn tampered_certificate_fails_verification() {
    let a = Arc::new(acyclic_dual_numbers(Q));
    let m = Arc::new(DgBimodule::regular(a));
    let mut ws = Workspace::new(Q);
    ws.add_certificate("c", &dgcat::homotopy::Certificate::identity(m));
    let mut doc = ws.to_document();
    doc.certificates.get_mut("c").unwrap().f.entries[0].2 = "2".into();
    let back = Workspace::from_document(&doc).unwrap();
    assert!(!back.certificates["c"].verify().passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn braid_words_serialize_canonically(letters in prop::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)], 0..3)) {
        let za = zigzag_ambient(3, Q).unwrap();
        let x = ks_complex(&za, &BraidWord::new(3, letters).unwrap()).unwrap();
        let ws = workspace_with_complex(&za.ambient, "w", &x);
        let once = ws.to_json();
        let back = Workspace::from_json(&once).unwrap();
        prop_assert_eq!(&back.complexes["w"], &x);
        prop_assert_eq!(back.to_json(), once);
    }
}
