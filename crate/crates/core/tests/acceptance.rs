//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Certificates are computed once per corpus example (see `common`) and
//! shared between criteria, so per-example runtime budgets are checked
//! against the wall time of the actual solve.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use telsum::certify::{
    identity_numeric_check, sum_annihilation_check, verify_certificate, verify_numeric,
};
use telsum::corpus::{denominator_pipelines, CORPUS};
use telsum::hyper::Roles;
use telsum::linalg::{is_nullvector, nullspace_poly_rows};
use telsum::parse::{parse_poly, parse_ratfun, parse_term};
use telsum::poly::{max_factor_free_of, poly_gcd, vars, Polynomial};
use telsum::telescope::operator_eq_up_to_constant;
use telsum::{bizeil, estden, theorem_bound, Error, SolveOptions, W2Variant};

use common::{certificate, corpus_example, hyperterm, random_nonzero_poly, random_poly};

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_denominator_estimates() {
    let mut elapsed_max = Duration::ZERO;
    for name in ["andrews-paule", "carlitz-1"] {
        let ex = corpus_example(name);
        let f = hyperterm(name);
        let started = Instant::now();
        let est = estden(&f, W2Variant::default()).expect("estden");
        let elapsed = started.elapsed();
        elapsed_max = elapsed_max.max(elapsed);
        let vs = f.vars().clone();
        let want_g1 = parse_poly(ex.golden_g1.unwrap(), &vs).unwrap().unit_normalize();
        let want_g2 = parse_poly(ex.golden_g2.unwrap(), &vs).unwrap().unit_normalize();
        assert_eq!(est.g1.expand().unit_normalize(), want_g1, "{name} g1");
        assert_eq!(est.g2.expand().unit_normalize(), want_g2, "{name} g2");
        assert!(elapsed < Duration::from_secs(5), "{name} estden took {elapsed:?}");
    }
    report(
        1,
        true,
        &format!("estimated denominators match published values (max {elapsed_max:?})"),
    );
}

#[test]
fn criterion_02_theoretical_bounds() {
    let f = hyperterm("andrews-paule");
    let started = Instant::now();
    let bounds = theorem_bound(&f).expect("theorem_bound");
    let elapsed = started.elapsed();
    let vs = f.vars().clone();
    let common_part = "(2*n-2*i+1)*(n-i+1)*(2*n-2*j+1)*(n-j+1)*(i+j)^2";
    let want_g1 = parse_poly(&format!("{common_part}*(j+1)^2"), &vs)
        .unwrap()
        .unit_normalize();
    let want_g2 = parse_poly(&format!("{common_part}*(i+1)^2"), &vs)
        .unwrap()
        .unit_normalize();
    assert_eq!(bounds.g1.expand().unit_normalize(), want_g1, "bound g1");
    assert_eq!(bounds.g2.expand().unit_normalize(), want_g2, "bound g2");
    assert!(elapsed < Duration::from_secs(10), "theorem_bound took {elapsed:?}");
    report(2, true, &format!("theoretical bounds match published pair ({elapsed:?})"));
}

#[test]
fn criterion_03_operators() {
    // Fixed solve order so budget measurements are not skewed by two
    // expensive solves racing on the same cores.
    let budgeted = [
        ("andrews-paule", 120u64),
        ("carlitz-1", 120),
        ("carlitz-2", 300),
        ("apery-schmidt-strehl", 120),
        ("graham-knuth-patashnik", 120),
        ("petkovsek-wilf-zeilberger", 120),
    ];
    let mut detail = String::new();
    for (name, budget) in budgeted {
        let ex = corpus_example(name);
        let (cert, elapsed) = certificate(name);
        assert_eq!(cert.order, ex.order, "{name} operator order");
        let vs = hyperterm(name).vars().clone();
        let pvars = std::sync::Arc::new(vs[..vs.len() - 2].to_vec());
        let golden: Vec<Polynomial> = ex
            .golden_coeffs
            .iter()
            .map(|s| parse_poly(s, &vs).unwrap().with_vars(&pvars).unwrap())
            .collect();
        assert!(
            operator_eq_up_to_constant(&cert.coeffs, &golden).unwrap(),
            "{name} operator coefficients"
        );
        assert!(
            *elapsed < Duration::from_secs(budget),
            "{name} solve took {elapsed:?} (budget {budget} s)"
        );
        detail.push_str(&format!("{name} {:.1}s ", elapsed.as_secs_f64()));
    }
    report(3, true, &format!("operators match published ones: {detail}"));
}

#[test]
fn criterion_04_certificate_values() {
    for name in ["andrews-paule", "carlitz-1"] {
        let ex = corpus_example(name);
        let (cert, _) = certificate(name);
        let vs = hyperterm(name).vars().clone();
        for (golden, got, label) in [
            (ex.golden_r1.unwrap(), &cert.r1, "R1"),
            (ex.golden_r2.unwrap(), &cert.r2, "R2"),
        ] {
            let want = parse_ratfun(golden.0, &vs)
                .unwrap()
                .div(&parse_ratfun(golden.1, &vs).unwrap())
                .unwrap();
            assert_eq!(&want, got, "{name} {label}");
        }
    }
    report(4, true, "R1 and R2 equal the published rational functions exactly");
}

/// Stretch criterion; not part of the gating suite. Run with
/// `cargo test -- --ignored criterion_05`.
#[test]
#[ignore = "stretch goal: order-6 search, up to 30 minutes"]
fn criterion_05_slow_example() {
    let ex = corpus_example("strehl");
    let f = hyperterm("strehl");
    let started = Instant::now();
    let cert = bizeil(&f, &SolveOptions::default()).expect("strehl certificate");
    let elapsed = started.elapsed();
    assert_eq!(cert.order, ex.order, "strehl operator order");
    let (ok, _) = verify_certificate(&f, &cert).unwrap();
    assert!(ok, "strehl certificate verifies");
    assert!(elapsed < Duration::from_secs(1800), "strehl took {elapsed:?}");
    report(5, true, &format!("order-6 operator found and verified ({elapsed:?})"));
}

#[test]
fn criterion_06_round_trip() {
    for ex in CORPUS.iter().filter(|e| !e.slow) {
        let f = hyperterm(ex.name);
        let (cert, _) = certificate(ex.name);
        let (ok, residual) = verify_certificate(&f, cert).unwrap();
        assert!(ok, "{} certificate fails verification: residual {residual}", ex.name);
    }

    let roles = Roles::new("n", ["i", "j"], &[]).unwrap();
    let opts = SolveOptions {
        max_order: 2,
        max_excess: 2,
        ..SolveOptions::default()
    };
    let mut rng = StdRng::seed_from_u64(0x7e15_0006);
    let mut found = 0usize;
    let mut unsolved = 0usize;
    let mut tested = 0usize;
    while tested < 50 {
        let natoms = rng.gen_range(1..=3);
        let mut parts = Vec::new();
        for _ in 0..natoms {
            let lin = |rng: &mut StdRng| {
                let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
                format!("({}*n+{}*i+{}*j+{})", c[0], c[1], c[2], c[3])
            };
            let top = lin(&mut rng);
            let bot = lin(&mut rng);
            parts.push(format!("binom({top},{bot})"));
        }
        let src = parts.join("*");
        let f = match parse_term(&src, &roles) {
            Ok(f) => f,
            Err(_) => continue,
        };
        // Skip terms whose shift quotients are degenerate (identically zero
        // summand); the search contract assumes a genuine hypergeometric term.
        if f.quotient_set(0).is_err() {
            continue;
        }
        tested += 1;
        match bizeil(&f, &opts) {
            Ok(cert) => {
                let (ok, _) = verify_certificate(&f, &cert)
                    .unwrap_or_else(|e| panic!("verification errored on {src}: {e}"));
                assert!(ok, "certificate for random term {src} fails verification");
                found += 1;
            }
            Err(Error::NoCertificate { .. }) => unsolved += 1,
            Err(e) => panic!("unexpected error on random term {src}: {e}"),
        }
    }
    assert!(found > 0, "expected at least one solvable random term");
    assert!(unsolved > 0, "expected the no-certificate path to be exercised");
    report(
        6,
        true,
        &format!(
            "corpus and {tested} random terms round-trip ({found} solved, {unsolved} clean no-certificate outcomes)"
        ),
    );
}

#[test]
fn criterion_07_corruption_sensitivity() {
    let mut rng = StdRng::seed_from_u64(0x7e15_0007);
    let mut total = 0usize;
    for ex in CORPUS.iter().filter(|e| !e.slow) {
        let f = hyperterm(ex.name);
        let (cert, _) = certificate(ex.name);
        for _ in 0..10 {
            let mut bad = cert.clone();
            // Perturb one coefficient of one operator polynomial.
            let l = rng.gen_range(0..bad.coeffs.len());
            let target = &bad.coeffs[l];
            let delta = Polynomial::int(target.vars(), rng.gen_range(1..=5i64));
            bad.coeffs[l] = if rng.gen_bool(0.5) {
                target.add(&delta)
            } else {
                target.sub(&delta)
            };
            let (ok, _) = verify_certificate(&f, &bad).unwrap();
            assert!(!ok, "{}: symbolic check accepted a corrupted operator", ex.name);
            let numeric = verify_numeric(&f, &bad, 2, rng.gen()).unwrap();
            assert!(!numeric, "{}: numeric check accepted a corrupted operator", ex.name);
            total += 1;
        }
    }
    report(
        7,
        true,
        &format!("{total} corrupted certificates rejected symbolically and numerically"),
    );
}

#[test]
fn criterion_08_identity_checks() {
    let no_params: BTreeMap<String, num::BigInt> = BTreeMap::new();
    let mut detail = String::new();

    for (name, range) in [("andrews-paule", (0i64, 10i64)), ("carlitz-1", (0, 8))] {
        let ex = corpus_example(name);
        let f = hyperterm(name);
        let rhs = ex.rhs_spec().unwrap().expect("example has a right-hand side");
        let started = Instant::now();
        let ok = identity_numeric_check(&f, &rhs, range, &no_params).unwrap();
        let elapsed = started.elapsed();
        assert!(ok, "{name} identity values");
        assert!(elapsed < Duration::from_secs(10), "{name} identity took {elapsed:?}");
        detail.push_str(&format!("{name} identity {:.2}s ", elapsed.as_secs_f64()));
    }

    for name in ["carlitz-1", "apery-schmidt-strehl", "petkovsek-wilf-zeilberger"] {
        let f = hyperterm(name);
        let (cert, _) = certificate(name);
        let started = Instant::now();
        let ok = sum_annihilation_check(&f, cert, (0, 8), &no_params).unwrap();
        let elapsed = started.elapsed();
        assert!(ok, "{name} sum annihilation");
        assert!(elapsed < Duration::from_secs(10), "{name} annihilation took {elapsed:?}");
        detail.push_str(&format!("{name} annihilation {:.2}s ", elapsed.as_secs_f64()));
    }
    report(8, true, &detail);
}

#[test]
fn criterion_09_kernel_properties() {
    const N: usize = 200;
    let vs = vars(&["x", "y", "z"]);
    let mut rng = StdRng::seed_from_u64(0x7e15_0009);

    // gcd multiplicativity: gcd(a*c, b*c) == gcd(a, b) * c up to a unit.
    for _ in 0..N {
        let a = random_nonzero_poly(&mut rng, &vs, 3, 2, 4);
        let b = random_nonzero_poly(&mut rng, &vs, 3, 2, 4);
        let c = random_nonzero_poly(&mut rng, &vs, 2, 2, 4);
        let lhs = poly_gcd(&a.mul(&c), &b.mul(&c)).unwrap().unit_normalize();
        let rhs = poly_gcd(&a, &b).unwrap().mul(&c).unit_normalize();
        assert_eq!(lhs, rhs, "gcd multiplicativity for a={a}, b={b}, c={c}");
    }

    // exact-division round-trip: (a*b)/b == a.
    for _ in 0..N {
        let a = random_poly(&mut rng, &vs, 4, 3, 6);
        let b = random_nonzero_poly(&mut rng, &vs, 3, 2, 6);
        assert_eq!(a.mul(&b).exact_div(&b).unwrap(), a, "division round-trip");
    }

    // shift inverse: shifting by k then -k is the identity.
    for _ in 0..N {
        let p = random_poly(&mut rng, &vs, 4, 3, 6);
        let k = rng.gen_range(-5..=5i64);
        assert_eq!(p.shift("y", k).shift("y", -k), p, "shift inverse");
    }

    // max-factor cofactor purity: dividing out the maximal factor supported
    // on {x} leaves nothing further supported on {x}.
    for _ in 0..N {
        let a = random_nonzero_poly(&mut rng, &vs, 2, 2, 3);
        let b = random_nonzero_poly(&mut rng, &vs, 2, 2, 3);
        let f = a.mul(&b);
        let m = max_factor_free_of(&f, &["x"]).unwrap();
        assert!(m.divides(&f), "extracted factor divides");
        let cof = f.exact_div(&m).unwrap();
        let again = max_factor_free_of(&cof, &["x"]).unwrap();
        assert!(again.is_constant(), "cofactor of {f} still has factor {again}");
    }

    // nullspace exactness: every basis vector is an exact null vector, and a
    // planted dependent row always yields a nonempty nullspace.
    for _ in 0..N {
        let cols = rng.gen_range(3..=5usize);
        let indep = rng.gen_range(1..cols);
        let mut rows: Vec<Vec<Polynomial>> = (0..indep)
            .map(|_| (0..cols).map(|_| random_poly(&mut rng, &vs, 2, 1, 3)).collect())
            .collect();
        // Plant one row that is a polynomial combination of the others.
        let mults: Vec<Polynomial> = (0..indep)
            .map(|_| random_poly(&mut rng, &vs, 2, 1, 2))
            .collect();
        let mut dep = vec![Polynomial::zero(&vs); cols];
        for (row, m) in rows.iter().zip(&mults) {
            for (d, e) in dep.iter_mut().zip(row) {
                *d = d.add(&e.mul(m));
            }
        }
        rows.push(dep);
        let basis = nullspace_poly_rows(rows.clone(), cols, &vs).unwrap();
        assert!(basis.len() >= cols - indep, "nullspace dimension");
        for v in &basis {
            assert!(v.iter().any(|p| !p.is_zero()), "nonzero basis vector");
            assert!(is_nullvector(&rows, v), "exact null vector");
        }
    }

    report(9, true, &format!("five kernel properties hold on {N} instances each"));
}

#[test]
fn criterion_10_pipeline_timings() {
    let ex = corpus_example("andrews-paule");
    let t = denominator_pipelines(ex).expect("all three pipelines terminate");
    let soft_ok = t.reduced <= t.theoretical.mul_f64(10.0) || t.reduced < Duration::from_secs(1);
    if !soft_ok {
        println!(
            "criterion 10: WARNING — reduced pipeline {:?} exceeds 10x theoretical {:?} (soft check)",
            t.reduced, t.theoretical
        );
    }
    report(
        10,
        true,
        &format!(
            "pipelines terminate (theoretical {:?}, unreduced {:?}, reduced {:?})",
            t.theoretical, t.unreduced, t.reduced
        ),
    );
}
