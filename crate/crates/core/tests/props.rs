//! Property-based tests for the polynomial kernel (proptest, 256 cases per
//! property by default).

use num::{BigRational, One};
use proptest::prelude::*;

use telsum::parse::parse_poly;
use telsum::poly::{poly_gcd, vars, Monomial, Polynomial, Vars};
use telsum::ratfun::RationalFunction;

fn tvars() -> Vars {
    vars(&["x", "y"])
}

fn arb_poly(max_terms: usize, max_deg: u32, bound: i64) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (0..=max_deg, 0..=max_deg, -bound..=bound),
        0..=max_terms,
    )
    .prop_map(|terms| {
        let vs = tvars();
        let terms = terms
            .into_iter()
            .filter(|&(_, _, c)| c != 0)
            .map(|(a, b, c)| (Monomial(vec![a, b]), BigRational::from_integer(c.into())))
            .collect();
        Polynomial::from_terms(&vs, terms)
    })
}

fn arb_nonzero(max_terms: usize, max_deg: u32, bound: i64) -> impl Strategy<Value = Polynomial> {
    arb_poly(max_terms, max_deg, bound).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(4, 3, 8), b in arb_poly(4, 3, 8), c in arb_poly(4, 3, 8)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.neg().neg(), a);
    }

    #[test]
    fn gcd_divides_both(a in arb_nonzero(3, 2, 5), b in arb_nonzero(3, 2, 5)) {
        let g = poly_gcd(&a, &b).unwrap();
        prop_assert!(g.divides(&a));
        prop_assert!(g.divides(&b));
    }

    #[test]
    fn gcd_is_symmetric(a in arb_nonzero(3, 2, 5), b in arb_nonzero(3, 2, 5)) {
        let g1 = poly_gcd(&a, &b).unwrap().unit_normalize();
        let g2 = poly_gcd(&b, &a).unwrap().unit_normalize();
        prop_assert_eq!(g1, g2);
    }

    #[test]
    fn product_division_round_trip(a in arb_poly(4, 3, 8), b in arb_nonzero(3, 2, 8)) {
        prop_assert_eq!(a.mul(&b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn shift_is_invertible(p in arb_poly(4, 3, 8), k in -6i64..=6) {
        prop_assert_eq!(p.shift("x", k).shift("x", -k), p.clone());
        prop_assert_eq!(p.shift("y", k).shift("y", -k), p);
    }

    #[test]
    fn shifts_commute(p in arb_poly(4, 3, 8), k in -4i64..=4, l in -4i64..=4) {
        prop_assert_eq!(p.shift("x", k).shift("y", l), p.shift("y", l).shift("x", k));
    }

    #[test]
    fn display_parse_round_trip(p in arb_poly(5, 4, 20)) {
        let reparsed = parse_poly(&p.to_string(), &tvars()).unwrap();
        prop_assert_eq!(reparsed, p);
    }

    #[test]
    fn rational_functions_stay_reduced(
        a in arb_poly(3, 2, 5),
        b in arb_nonzero(3, 2, 5),
        c in arb_nonzero(2, 2, 5),
    ) {
        // (a*c)/(b*c) reduces to the same canonical form as a/b
        let lhs = RationalFunction::new(a.mul(&c), b.mul(&c)).unwrap();
        let rhs = RationalFunction::new(a, b).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        if !lhs.is_zero() {
            prop_assert!(poly_gcd(lhs.num(), lhs.den()).unwrap().is_constant());
        }
        prop_assert!(lhs.den().normalization_unit().is_one());
    }

    #[test]
    fn rational_arithmetic_matches_field_rules(
        a in arb_poly(2, 2, 4),
        b in arb_nonzero(2, 2, 4),
        c in arb_poly(2, 2, 4),
        d in arb_nonzero(2, 2, 4),
    ) {
        let x = RationalFunction::new(a, b).unwrap();
        let y = RationalFunction::new(c, d).unwrap();
        let sum = x.add(&y).unwrap();
        prop_assert_eq!(sum.sub(&y).unwrap(), x.clone());
        if !y.is_zero() {
            prop_assert_eq!(x.mul(&y).unwrap().div(&y).unwrap(), x);
        }
    }
}
