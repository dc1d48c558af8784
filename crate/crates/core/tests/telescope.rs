//! Telescoping search behavior on small inputs, operator algebra, and
//! certificate serialization.

mod common;

use std::sync::Arc;

use telsum::certify::verify_certificate;
use telsum::manifest::CertificateDoc;
use telsum::parse::parse_poly;
use telsum::poly::{vars, Polynomial};
use telsum::telescope::operator_eq_up_to_constant;
use telsum::{bizeil, SolveOptions};

use common::{certificate, corpus_example, hyperterm};

#[test]
fn order_zero_example_end_to_end() {
    let (cert, _) = certificate("andrews-paule");
    assert_eq!(cert.order, 0);
    assert_eq!(cert.shift_var, "n");
    assert_eq!(cert.coeffs.len(), 1);
    let pvars = Arc::new(vec!["n".to_string()]);
    let want = parse_poly("2*n+1", &pvars).unwrap();
    assert!(operator_eq_up_to_constant(&cert.coeffs, &[want]).unwrap());

    let f = hyperterm("andrews-paule");
    let (ok, residual) = verify_certificate(&f, cert).unwrap();
    assert!(ok, "residual {residual}");
}

#[test]
fn second_order_operator_factors() {
    // The published order-2 operator for the second example factors as
    // ((n+2)N - (4n+6)) * (N - 1) in the shift algebra, where N p(n) = p(n+1) N.
    // Composing (aN + b)(cN + d) gives ac' N^2 + (ad' + bc) N + bd with
    // p' = p shifted by one in n; the product must reproduce the operator.
    let pvars = vars(&["n"]);
    let p = |s: &str| parse_poly(s, &pvars).unwrap();
    let (a, b) = (p("n+2"), p("-(4*n+6)"));
    let (c, d) = (p("1"), p("-1"));
    let composed = [
        b.mul(&d),
        a.mul(&d.shift("n", 1)).add(&b.mul(&c)),
        a.mul(&c.shift("n", 1)),
    ];
    let golden = [p("4*n+6"), p("-(5*n+8)"), p("n+2")];
    assert_eq!(composed, golden);

    // and the solver finds exactly this operator (up to a constant)
    let (cert, _) = certificate("carlitz-1");
    assert!(operator_eq_up_to_constant(&cert.coeffs, &golden).unwrap());
}

#[test]
fn operator_comparison_ignores_constant_multiples() {
    let pvars = vars(&["n"]);
    let p = |s: &str| parse_poly(s, &pvars).unwrap();
    let a = [p("2*n+2"), p("-4")];
    let b = [p("3*n+3"), p("-6")];
    assert!(operator_eq_up_to_constant(&a, &b).unwrap());
    let c = [p("3*n+3"), p("6")];
    assert!(!operator_eq_up_to_constant(&a, &c).unwrap());
    let shorter = [p("2*n+2")];
    assert!(!operator_eq_up_to_constant(&a, &shorter).unwrap());
}

#[test]
fn certificate_structure_invariants() {
    for name in ["andrews-paule", "carlitz-1", "apery-schmidt-strehl"] {
        let (cert, _) = certificate(name);
        let f = hyperterm(name);
        // leading and trailing operator coefficients are nonzero
        assert!(!cert.coeffs[0].is_zero(), "{name}: trailing coefficient");
        assert!(!cert.coeffs[cert.order].is_zero(), "{name}: leading coefficient");
        // operator coefficients are free of the summation variables
        for a in &cert.coeffs {
            for s in &f.roles.sums {
                assert!(!a.depends_on(s), "{name}: coefficient depends on {s}");
            }
        }
        // R1 = f1 / (d * g1) and R2 = f2 / (d * g2)
        let vs = f.vars().clone();
        let r1 = telsum::ratfun::RationalFunction::new(
            cert.f1.with_vars(&vs).unwrap(),
            cert.d.mul(&cert.g1).with_vars(&vs).unwrap(),
        )
        .unwrap();
        assert_eq!(&r1, &cert.r1, "{name}: R1 presentation");
        let r2 = telsum::ratfun::RationalFunction::new(
            cert.f2.with_vars(&vs).unwrap(),
            cert.d.mul(&cert.g2).with_vars(&vs).unwrap(),
        )
        .unwrap();
        assert_eq!(&r2, &cert.r2, "{name}: R2 presentation");
        // the trace records the search path and ends in a success
        assert!(cert.trace.last().unwrap().ends_with("solved"), "{name}: trace");
    }
}

#[test]
fn search_without_reduction_still_succeeds() {
    let f = hyperterm("andrews-paule");
    let opts = SolveOptions {
        reduce: false,
        ..SolveOptions::default()
    };
    let cert = bizeil(&f, &opts).unwrap();
    assert_eq!(cert.order, 0);
    let (ok, _) = verify_certificate(&f, &cert).unwrap();
    assert!(ok);
}

#[test]
fn order_cap_is_respected() {
    // carlitz-1 needs order 2; capping at order 1 must fail cleanly.
    let f = hyperterm("carlitz-1");
    let opts = SolveOptions {
        max_order: 1,
        ..SolveOptions::default()
    };
    match bizeil(&f, &opts) {
        Err(telsum::Error::NoCertificate { trace }) => {
            assert!(trace.contains("no operator"), "trace explains the failure");
        }
        other => panic!("expected NoCertificate, got {other:?}"),
    }
}

#[test]
fn certificate_json_round_trip() {
    let ex = corpus_example("carlitz-1");
    let (cert, _) = certificate("carlitz-1");
    let doc = CertificateDoc::from_certificate(cert);
    let json = doc.to_json().unwrap();
    let back = CertificateDoc::from_json(&json)
        .unwrap()
        .to_certificate(&ex.roles().unwrap())
        .unwrap();
    assert_eq!(back.order, cert.order);
    assert_eq!(back.shift_var, cert.shift_var);
    let eq_poly = |a: &Polynomial, b: &Polynomial| a == b;
    assert!(back
        .coeffs
        .iter()
        .zip(&cert.coeffs)
        .all(|(a, b)| eq_poly(a, b)));
    assert_eq!(back.r1, cert.r1);
    assert_eq!(back.r2, cert.r2);
    assert_eq!(back.d, cert.d);

    // the deserialized certificate still verifies
    let f = hyperterm("carlitz-1");
    let (ok, _) = verify_certificate(&f, &back).unwrap();
    assert!(ok);
}
