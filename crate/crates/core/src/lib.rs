//! Exact creative telescoping for bivariate hypergeometric double sums.
//!
//! Given a proper hypergeometric term F(n, i, j) the solver searches for a
//! recurrence operator L in the shift of n together with a pair of rational
//! certificates R1, R2 such that L F = Delta_i(R1 F) + Delta_j(R2 F). Summing
//! over i and j then yields a recurrence for the double sum. All arithmetic
//! is exact over the rationals.

pub mod certify;
pub mod corpus;
pub mod denest;
pub mod error;
pub mod factored;
pub mod hyper;
pub mod linalg;
pub mod manifest;
mod modgcd;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod telescope;

pub use denest::{estden, reduction_candidates, theorem_bound, W2Variant};
pub use error::{Error, Result};
pub use hyper::{HyperTerm, Roles};
pub use manifest::{CertificateDoc, ProblemManifest};
pub use telescope::{bizeil, bizeil_with, Certificate, SolveOptions};
