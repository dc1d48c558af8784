//! Shared helpers for the integration tests: cached corpus certificates and
//! a seeded random polynomial generator.

#![allow(dead_code)]

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num::BigRational;
use rand::rngs::StdRng;
use rand::Rng;

use telsum::corpus::{example, CorpusExample, CORPUS};
use telsum::poly::{vars, Monomial, Polynomial, Vars};
use telsum::{bizeil, Certificate, HyperTerm, SolveOptions};

/// Certificates are expensive; compute each corpus example at most once per
/// test binary and share the result (with its wall time) across tests.
static CERTS: [OnceLock<(Certificate, Duration)>; CORPUS.len()] =
    [const { OnceLock::new() }; CORPUS.len()];

pub fn corpus_example(name: &str) -> &'static CorpusExample {
    example(name).unwrap_or_else(|| panic!("unknown corpus example {name}"))
}

pub fn hyperterm(name: &str) -> HyperTerm {
    corpus_example(name)
        .hyperterm()
        .expect("corpus term parses")
}

/// Solve a corpus example with default options, caching the result.
pub fn certificate(name: &str) -> &'static (Certificate, Duration) {
    let idx = CORPUS
        .iter()
        .position(|e| e.name == name)
        .unwrap_or_else(|| panic!("unknown corpus example {name}"));
    CERTS[idx].get_or_init(|| {
        let f = hyperterm(name);
        let started = Instant::now();
        let cert = bizeil(&f, &SolveOptions::default())
            .unwrap_or_else(|e| panic!("no certificate for {name}: {e}"));
        (cert, started.elapsed())
    })
}

pub fn nij_vars() -> Vars {
    vars(&["n", "i", "j"])
}

/// Random polynomial in the given variables: up to `max_terms` monomials of
/// per-variable degree at most `max_deg`, integer coefficients in
/// [-bound, bound] excluding an all-zero result only by chance.
pub fn random_poly(
    rng: &mut StdRng,
    vs: &Vars,
    max_terms: usize,
    max_deg: u32,
    bound: i64,
) -> Polynomial {
    let nterms = rng.gen_range(1..=max_terms);
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let exps: Vec<u32> = (0..vs.len()).map(|_| rng.gen_range(0..=max_deg)).collect();
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            terms.push((Monomial(exps), BigRational::from_integer(c.into())));
        }
    }
    Polynomial::from_terms(vs, terms)
}

/// Like `random_poly` but never zero.
pub fn random_nonzero_poly(
    rng: &mut StdRng,
    vs: &Vars,
    max_terms: usize,
    max_deg: u32,
    bound: i64,
) -> Polynomial {
    loop {
        let p = random_poly(rng, vs, max_terms, max_deg, bound);
        if !p.is_zero() {
            return p;
        }
    }
}
