//! Hypergeometric term tests: shift quotients, exact evaluation, and the
//! quotient sets feeding the telescoping search.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Zero};

use telsum::hyper::{eval_binomial, Roles};
use telsum::parse::{parse_poly, parse_ratfun, parse_term};
use telsum::HyperTerm;

fn term(src: &str) -> HyperTerm {
    let roles = Roles::new("n", ["i", "j"], &[]).unwrap();
    parse_term(src, &roles).unwrap()
}

fn int_point(pairs: &[(&str, i64)]) -> BTreeMap<String, BigInt> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), BigInt::from(*v)))
        .collect()
}

#[test]
fn binomial_conventions() {
    let b = |a: i64, b: i64| eval_binomial(&BigInt::from(a), &BigInt::from(b));
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    assert_eq!(b(4, 2), r(6));
    assert_eq!(b(4, 0), r(1));
    assert_eq!(b(3, 5), r(0), "short top gives zero");
    assert_eq!(b(3, -1), r(0), "negative bottom gives zero");
    assert_eq!(b(-1, 2), r(1), "polynomial extension for negative top");
    assert_eq!(b(-2, 3), r(-4));
}

#[test]
fn shift_quotient_goldens() {
    let f = term("binom(n,i)");
    let vs = f.vars().clone();
    let want = parse_ratfun("(n-i)/(i+1)", &vs).unwrap();
    assert_eq!(f.shift_quotient("i", 1).unwrap(), want);
    let want_n = parse_ratfun("(n+1)/(n+1-i)", &vs).unwrap();
    assert_eq!(f.shift_quotient("n", 1).unwrap(), want_n);
}

#[test]
fn shift_quotients_compose() {
    // F(v+2)/F(v) == (F(v+2)/F(v+1)) * (F(v+1)/F(v)) for every variable.
    let f = term("binom(i+j,i)^2*binom(4*n-2*i-2*j,2*n-2*i)");
    for v in ["n", "i", "j"] {
        let q2 = f.shift_quotient(v, 2).unwrap();
        let q1 = f.shift_quotient(v, 1).unwrap();
        let composed = q1.shift(v, 1).unwrap().mul(&q1).unwrap();
        assert_eq!(q2, composed, "cocycle in {v}");
    }
}

#[test]
fn quotients_predict_values() {
    // The symbolic shift quotient matches the ratio of actual term values.
    let f = term("binom(i+j,i)*binom(n-i,j)*binom(n-j,n-i-j)");
    let base = int_point(&[("n", 7), ("i", 2), ("j", 3)]);
    let at = |p: &BTreeMap<String, BigInt>| f.eval(p).unwrap();
    for v in ["n", "i", "j"] {
        let mut shifted = base.clone();
        shifted.insert(v.to_string(), &base[v] + 1);
        let q = f.shift_quotient(v, 1).unwrap();
        let ratpt: BTreeMap<String, BigRational> = base
            .iter()
            .map(|(k, x)| (k.clone(), BigRational::from_integer(x.clone())))
            .collect();
        assert_eq!(
            at(&shifted),
            at(&base) * q.eval(&ratpt).unwrap(),
            "value ratio in {v}"
        );
    }
}

#[test]
fn exact_term_and_sum_evaluation() {
    let f = term("binom(i+j,i)^2*binom(4*n-2*i-2*j,2*n-2*i)");
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));

    assert_eq!(f.eval(&int_point(&[("n", 1), ("i", 1), ("j", 1)])).unwrap(), r(4));

    // (2n+1) * binom(2n,n)^2 at n = 1, 2, 3
    for (n, want) in [(1i64, 12i64), (2, 180), (3, 2800)] {
        let total = f
            .eval_sum([(0, n), (0, n)], &int_point(&[("n", n)]))
            .unwrap();
        assert_eq!(total, r(want), "double sum at n={n}");
    }
}

#[test]
fn signed_term_evaluation() {
    let f = term("(-1)^(i+j)*binom(n,i)*binom(n,j)");
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    assert_eq!(f.eval(&int_point(&[("n", 3), ("i", 1), ("j", 0)])).unwrap(), r(-3));
    // (sum of (-1)^i binom(n,i))^2 == 0 for n >= 1
    let total = f.eval_sum([(0, 3), (0, 3)], &int_point(&[("n", 3)])).unwrap();
    assert!(total.is_zero());
}

#[test]
fn quotient_set_common_denominator() {
    let f = term("binom(i+j,i)*binom(n-i,j)*binom(n-j,n-i-j)");
    let vs = f.vars().clone();
    let qs = f.quotient_set(2).unwrap();
    let want = parse_poly("(-n+i-1+j)^2*(-n+i-2+j)^2", &vs)
        .unwrap()
        .unit_normalize();
    assert_eq!(qs.d_poly().unit_normalize(), want);

    // every quotient times the common denominator is polynomial
    for q in qs.quotients().unwrap() {
        assert!(
            q.den().divides(&qs.d_poly()),
            "denominator {} divides d",
            q.den()
        );
    }
}

#[test]
fn roles_reject_bad_configurations() {
    assert!(Roles::new("n", ["n", "j"], &[]).is_err(), "duplicate symbol");
    assert!(Roles::new("n", ["i", "i"], &[]).is_err(), "repeated sum var");
    assert!(Roles::new("n", ["i", "j"], &["i"]).is_err(), "param clashes");
}
