//! Denominator estimation: block structure, bound relationships, and the
//! deterministic candidate ordering used by the search.

use telsum::corpus::example;
use telsum::parse::parse_poly;
use telsum::{estden, reduction_candidates, theorem_bound, W2Variant};

#[test]
fn estimate_blocks_multiply_out() {
    for name in ["andrews-paule", "carlitz-1", "carlitz-2"] {
        let f = example(name).unwrap().hyperterm().unwrap();
        let est = estden(&f, W2Variant::default()).unwrap();
        let g1 = est.v.mul(&est.u1).mul(&est.u2).expand().unit_normalize();
        let g2 = est.v.mul(&est.w1).mul(&est.w2).expand().unit_normalize();
        assert_eq!(est.g1.expand().unit_normalize(), g1, "{name}: g1 = v*u1*u2");
        assert_eq!(est.g2.expand().unit_normalize(), g2, "{name}: g2 = v*w1*w2");
    }
}

#[test]
fn estimate_divides_theoretical_bound() {
    // The heuristic estimate must always divide the safe theoretical bound.
    for name in [
        "andrews-paule",
        "carlitz-1",
        "apery-schmidt-strehl",
        "petkovsek-wilf-zeilberger",
    ] {
        let f = example(name).unwrap().hyperterm().unwrap();
        let est = estden(&f, W2Variant::default()).unwrap();
        let bound = theorem_bound(&f).unwrap();
        assert!(
            est.g1.expand().divides(&bound.g1.expand()),
            "{name}: estimated g1 divides bound g1"
        );
        assert!(
            est.g2.expand().divides(&bound.g2.expand()),
            "{name}: estimated g2 divides bound g2"
        );
    }
}

#[test]
fn w2_variants_both_succeed_on_corpus() {
    for ex in telsum::corpus::CORPUS.iter() {
        let f = ex.hyperterm().unwrap();
        for variant in [W2Variant::Algorithm, W2Variant::Theorem] {
            let est = estden(&f, variant).unwrap();
            assert!(!est.g1.expand().is_zero(), "{}: zero g1", ex.name);
            assert!(!est.g2.expand().is_zero(), "{}: zero g2", ex.name);
        }
    }
}

#[test]
fn candidate_list_is_ordered_and_complete() {
    let f = example("andrews-paule").unwrap().hyperterm().unwrap();
    let est = estden(&f, W2Variant::default()).unwrap();
    let sum_idxs = f.sum_var_indices();
    let cands = reduction_candidates(&est.g1, &est.g2, &sum_idxs.to_vec()).unwrap();
    assert!(!cands.is_empty());

    // last entry is the unreduced pair
    let (lg1, lg2) = cands.last().unwrap();
    assert_eq!(lg1.expand(), est.g1.expand());
    assert_eq!(lg2.expand(), est.g2.expand());

    // no duplicate pairs
    for (a, pair_a) in cands.iter().enumerate() {
        for pair_b in cands.iter().skip(a + 1) {
            assert!(
                pair_a.0.expand() != pair_b.0.expand() || pair_a.1.expand() != pair_b.1.expand(),
                "duplicate candidate pair"
            );
        }
    }

    // every candidate divides the unreduced estimate
    for (c1, c2) in &cands {
        assert!(c1.expand().divides(&est.g1.expand()), "candidate divides g1");
        assert!(c2.expand().divides(&est.g2.expand()), "candidate divides g2");
    }
}

#[test]
fn carlitz_estimates_match_published_values() {
    let ex = example("carlitz-1").unwrap();
    let f = ex.hyperterm().unwrap();
    let vs = f.vars().clone();
    let est = estden(&f, W2Variant::default()).unwrap();
    assert_eq!(
        est.g1.expand().unit_normalize(),
        parse_poly("(j+1)^2*(j-n)", &vs).unwrap().unit_normalize()
    );
    assert_eq!(
        est.g2.expand().unit_normalize(),
        parse_poly("(i+1)^2*(i-n)", &vs).unwrap().unit_normalize()
    );
}
