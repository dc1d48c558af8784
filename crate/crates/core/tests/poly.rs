//! Deterministic golden tests for the polynomial and factored-form kernels.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use telsum::factored::Factored;
use telsum::parse::{parse_poly, parse_ratfun};
use telsum::poly::{
    factor_depending_on, max_factor_free_of, poly_gcd, poly_lcm, vars, Polynomial,
};
use telsum::ratfun::RationalFunction;

fn p(src: &str) -> Polynomial {
    parse_poly(src, &vars(&["x", "y", "z"])).unwrap()
}

#[test]
fn gcd_of_structured_products() {
    let a = p("(x+1)^2*(x-y)");
    let b = p("(x+1)*(x+y)");
    assert_eq!(poly_gcd(&a, &b).unwrap().unit_normalize(), p("x+1"));

    // coprime inputs
    assert!(poly_gcd(&p("x+1"), &p("y+2")).unwrap().is_constant());

    // gcd with zero is the other argument (normalized)
    let z = Polynomial::zero(&vars(&["x", "y", "z"]));
    assert_eq!(poly_gcd(&a, &z).unwrap().unit_normalize(), a.unit_normalize());
}

#[test]
fn lcm_times_gcd_is_product() {
    let a = p("(x+1)*(x-y)");
    let b = p("(x+1)*(y+1)");
    let g = poly_gcd(&a, &b).unwrap();
    let l = poly_lcm(&a, &b).unwrap();
    assert_eq!(
        g.mul(&l).unit_normalize(),
        a.mul(&b).unit_normalize(),
        "gcd * lcm == a * b up to a unit"
    );
}

#[test]
fn exact_division_detects_non_divisors() {
    let a = p("x^2-y^2");
    assert_eq!(a.exact_div(&p("x-y")).unwrap(), p("x+y"));
    assert!(a.exact_div(&p("x+1")).is_err());
    assert!(p("x+1").divides(&p("x^2+2*x+1")));
    assert!(!p("x+2").divides(&p("x^2+2*x+1")));
}

#[test]
fn shift_goldens() {
    assert_eq!(p("(x+y)^2").shift("x", 1), p("(x+y+1)^2"));
    assert_eq!(p("x^2").shift("x", -2), p("(x-2)^2"));
    // shifting an absent variable is the identity
    assert_eq!(p("y+1").shift("x", 7), p("y+1"));
}

#[test]
fn content_and_primitive_part() {
    let f = p("(2*y+2)*x^2 + (4*y+4)*x");
    let (content, primitive) = f.content_primitive(&["x"]).unwrap();
    assert_eq!(content.unit_normalize(), p("y+1"));
    assert_eq!(primitive.mul(&content).unit_normalize(), f.unit_normalize());
}

#[test]
fn max_factor_extraction() {
    let f = p("(y+1)^2*(x+y)*(x+1)");
    let free_of_x = max_factor_free_of(&f, &["y"]).unwrap();
    assert_eq!(free_of_x, p("(y+1)^2"));
    let with_x = factor_depending_on(&f, "x").unwrap();
    assert_eq!(with_x, p("(x+y)*(x+1)"));
}

#[test]
fn polynomial_display_round_trips() {
    for src in [
        "x^2 + 2*x*y + y^2",
        "-3*x + 1/2",
        "x*y*z - z^2",
        "7",
        "0",
    ] {
        let poly = p(src);
        let reparsed = parse_poly(&poly.to_string(), &vars(&["x", "y", "z"])).unwrap();
        assert_eq!(poly, reparsed, "display of {src} re-parses to the same value");
    }
}

#[test]
fn rational_function_canonical_form() {
    let vs = vars(&["x", "y", "z"]);
    let r = parse_ratfun("(x^2-y^2)/(2*x+2*y)", &vs).unwrap();
    // reduced and denominator unit-normalized
    assert_eq!(r.num(), &p("1/2*x - 1/2*y"));
    assert_eq!(r.den(), &p("1"));

    let r = parse_ratfun("(x+1)/((x+1)^2*(y+1))", &vs).unwrap();
    assert!(poly_gcd(r.num(), r.den()).unwrap().is_constant());
    assert_eq!(r.den().normalization_unit(), BigRational::from_integer(1.into()));

    let s = r.mul(&RationalFunction::from_poly(p("(x+1)*(y+1)"))).unwrap();
    assert_eq!(s, RationalFunction::one(&vs));
}

#[test]
fn rational_function_eval() {
    let vs = vars(&["x", "y", "z"]);
    let r = parse_ratfun("(x+y)/(x-y)", &vs).unwrap();
    let mut at = BTreeMap::new();
    at.insert("x".to_string(), BigRational::from_integer(BigInt::from(3)));
    at.insert("y".to_string(), BigRational::from_integer(BigInt::from(1)));
    at.insert("z".to_string(), BigRational::from_integer(BigInt::from(0)));
    assert_eq!(r.eval(&at).unwrap(), BigRational::from_integer(2.into()));
    at.insert("y".to_string(), BigRational::from_integer(BigInt::from(3)));
    assert!(r.eval(&at).is_err(), "pole is reported");
    assert!(!r.den_nonzero_at(&at));
}

#[test]
fn factored_arithmetic() {
    let vs = vars(&["x", "y", "z"]);
    let mut a = Factored::one(&vs);
    a.push(&p("x+1"), 2);
    a.push(&p("y+1"), 1);
    let mut b = Factored::one(&vs);
    b.push(&p("x+1"), 1);
    b.push(&p("x-y"), 1);

    assert_eq!(a.expand(), p("(x+1)^2*(y+1)"));
    assert_eq!(a.gcd(&b).unwrap().expand(), p("x+1"));
    assert_eq!(a.lcm(&b).unwrap().expand().unit_normalize(), p("(x+1)^2*(y+1)*(x-y)").unit_normalize());

    let q = a.div_exact(&a.gcd(&b).unwrap()).unwrap();
    assert_eq!(q.expand(), p("(x+1)*(y+1)"));

    assert_eq!(a.shift("x", 1).expand(), p("(x+2)^2*(y+1)"));
    assert_eq!(a.multiplicity_of(&p("x+1")), 2);
    assert_eq!(a.multiplicity_of(&p("x+2")), 0);
    assert_eq!(a.total_degree(), 3);
}

#[test]
fn parse_errors_carry_positions() {
    let vs = vars(&["x", "y", "z"]);
    let err = parse_poly("x +* y", &vs).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("line 1"), "error `{msg}` reports a line");
    assert!(msg.contains("column"), "error `{msg}` reports a column");
    assert!(parse_poly("w + 1", &vs).is_err(), "unknown symbol rejected");
}
