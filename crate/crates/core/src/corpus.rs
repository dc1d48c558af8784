//! Bundled double-sum identities with frozen golden data, used by the
//! corpus runner and the regression tests.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::certify::{self, RhsSpec};
use crate::denest::{estden, theorem_bound, W2Variant};
use crate::error::Result;
use crate::hyper::{HyperTerm, Roles};
use crate::parse::{parse_poly, parse_ratfun, parse_term};
use crate::telescope::{bizeil, bizeil_with, operator_eq_up_to_constant, SolveOptions};

#[derive(Clone, Copy, Debug)]
pub enum RhsKind {
    Closed,
    SingleSum,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusExample {
    pub name: &'static str,
    pub term: &'static str,
    pub rec: &'static str,
    pub sums: [&'static str; 2],
    pub params: &'static [&'static str],
    /// Expected operator order.
    pub order: usize,
    /// Operator coefficients a_0..a_r, empty when only the order is known.
    pub golden_coeffs: &'static [&'static str],
    /// Estimated denominators, where published.
    pub golden_g1: Option<&'static str>,
    pub golden_g2: Option<&'static str>,
    /// Common denominator of the recurrence shift quotients at the target
    /// order, where published.
    pub golden_d: Option<&'static str>,
    /// Exact certificates as (numerator, denominator), where published.
    pub golden_r1: Option<(&'static str, &'static str)>,
    pub golden_r2: Option<(&'static str, &'static str)>,
    pub rhs: Option<(RhsKind, &'static str)>,
    /// Inclusive identity-check range for the recurrence variable.
    pub n_range: (i64, i64),
    pub slow: bool,
}

pub const CORPUS: [CorpusExample; 7] = [
    CorpusExample {
        name: "andrews-paule",
        term: "binom(i+j,i)^2*binom(4*n-2*i-2*j,2*n-2*i)",
        rec: "n",
        sums: ["i", "j"],
        params: &[],
        order: 0,
        golden_coeffs: &["2*n+1"],
        golden_g1: Some("(2*n-2*i+1)*(n-i+1)*(j+1)^2"),
        golden_g2: Some("(2*n-2*i+1)*(n-i+1)*(i+1)^2"),
        golden_d: None,
        golden_r1: Some((
            "i^2*(6*n^2+5*n+1+6*j*n^2+j*n-j-i*n+2*i*n^2-2*i-4*j^2*n-2*j^2-3*i*j-4*i*j*n)",
            "(2*n-2*i+1)*(1+j)^2",
        )),
        golden_r2: Some((
            "-2*n^2+2*j*n^2+6*i*n^2+9*i*n+3*j*n-4*i*j*n-4*i^2*n-n+j-3*i*j+2*i-4*i^2",
            "2*n-2*i+1",
        )),
        rhs: Some((RhsKind::Closed, "(2*n+1)*binom(2*n,n)^2")),
        n_range: (0, 10),
        slow: false,
    },
    CorpusExample {
        name: "carlitz-1",
        term: "binom(i+j,i)*binom(n-i,j)*binom(n-j,n-i-j)",
        rec: "n",
        sums: ["i", "j"],
        params: &[],
        order: 2,
        golden_coeffs: &["4*n+6", "-(8+5*n)", "n+2"],
        golden_g1: Some("(j+1)^2*(-n+j)"),
        golden_g2: Some("(i+1)^2*(-n+i)"),
        golden_d: Some("(-n+i-1+j)^2*(-n+i-2+j)^2"),
        golden_r1: Some((
            "-i^2*(-n+i-1)*(36-10*j*i^2*n-13*j^2*n*i+60*j^2+60*j*i-2*i^2-38*j^2*i\
             -8*j*i^2+10*i^3+36*n^3-11*i*n^3-14*j*n^3-2*i^4-92*j*n^2+8*i^2*n-80*i*n\
             +5*j^2*n^2+8*j^2*i^2+88*j*i*n+42*j^2*n-172*j*n+24*j*i*n^2+5*i^2*n^2\
             +3*i^3*n-54*i*n^2+88*n^2+4*j^3*n-90*j+6*j^3-40*i+5*n^4+90*n)",
            "(-n+i-1+j)^2*(-n+i-2+j)^2*(j+1)^2",
        )),
        golden_r2: Some((
            "(64-19*j*i^2*n-6*j^2*n*i+14*j^2+74*j*i+54*i^2-10*j^2*i-36*j*i^2+2*i^3\
             +39*n^3-16*i*n^3-9*j*n^3-4*i^4+6*j*i^3-53*j*n^2+50*i^2*n-176*i*n\
             +4*j^2*n^2+4*j^2*i^2+5*n^4+83*j*i*n+16*j^2*n-100*j*n+22*j*i*n^2\
             +11*i^2*n^2+4*i^3*n-93*i*n^2+112*n^2-60*j-108*i+140*n)*(-n-1+j)",
            "(-n+i-2+j)^2*(-n+i-1+j)^2",
        )),
        rhs: Some((RhsKind::SingleSum, "binom(2*i,i)")),
        n_range: (0, 8),
        slow: false,
    },
    CorpusExample {
        name: "carlitz-2",
        term: "binom(i+j,i)*binom(m-i+j,j)*binom(n-j+i,i)*binom(m+n-i-j,m-i)",
        rec: "n",
        sums: ["i", "j"],
        params: &["m"],
        order: 2,
        golden_coeffs: &[
            "2*(m+3+n)*(2+m+n)^2",
            "-(3*m+2*n*m+4*n^2+14+15*n)*(n+m+3)",
            "(2*n+5)*(n+2)^2",
        ],
        golden_g1: None,
        golden_g2: None,
        golden_d: Some("(-n+j-1)^2*(-n+j-2)^2"),
        golden_r1: None,
        golden_r2: None,
        rhs: None,
        n_range: (0, 6),
        slow: false,
    },
    CorpusExample {
        name: "apery-schmidt-strehl",
        term: "binom(n,j)*binom(n+j,j)*binom(j,i)^3",
        rec: "n",
        sums: ["i", "j"],
        params: &[],
        order: 2,
        golden_coeffs: &["(n+1)^3", "-(3+2*n)*(17*n^2+51*n+39)", "(n+2)^3"],
        golden_g1: None,
        golden_g2: None,
        golden_d: Some("(n+2-j)*(n+1-j)"),
        golden_r1: None,
        golden_r2: None,
        rhs: None,
        n_range: (0, 8),
        slow: false,
    },
    CorpusExample {
        name: "strehl",
        term: "binom(n,j)*binom(n+j,j)*binom(j,i)^2*binom(2*i,i)^2*binom(2*i,j-i)",
        rec: "n",
        sums: ["i", "j"],
        params: &[],
        order: 6,
        golden_coeffs: &[],
        golden_g1: None,
        golden_g2: None,
        golden_d: Some("(n+1-j)*(n+2-j)*(n+3-j)*(n+4-j)*(n+5-j)*(n+6-j)"),
        golden_r1: None,
        golden_r2: None,
        rhs: None,
        n_range: (0, 6),
        slow: true,
    },
    CorpusExample {
        name: "graham-knuth-patashnik",
        term: "(-1)^(j+k)*binom(j+k,k+l)*binom(r,j)*binom(n,k)*binom(s+n-j-k,m-j)",
        rec: "r",
        sums: ["j", "k"],
        params: &["n", "s", "l", "m"],
        order: 1,
        golden_coeffs: &["(r+n+1)*(n+s+l-m-r)", "(r-l+1)*(r-s)"],
        golden_g1: None,
        golden_g2: None,
        golden_d: Some("r-j+1"),
        golden_r1: None,
        golden_r2: None,
        rhs: None,
        n_range: (0, 5),
        slow: false,
    },
    CorpusExample {
        name: "petkovsek-wilf-zeilberger",
        term: "(-1)^(n+r+s)*binom(n,r)*binom(n,s)*binom(n+s,s)*binom(n+r,r)\
               *binom(2*n-r-s,n)",
        rec: "n",
        sums: ["r", "s"],
        params: &[],
        order: 2,
        golden_coeffs: &[
            "4*(4*n+5)*(4*n+3)*(n+1)",
            "2*(2*n+3)*(3*n^2+9*n+7)",
            "-(n+2)^3",
        ],
        golden_g1: None,
        golden_g2: None,
        golden_d: Some(
            "(n+1)*(n+2)*(n+1-r)*(n+2-r)*(n+1-s)*(n+2-s)*(n-r-s+1)*(n+2-r-s)",
        ),
        golden_r1: None,
        golden_r2: None,
        rhs: None,
        n_range: (0, 8),
        slow: false,
    },
];

pub fn example(name: &str) -> Option<&'static CorpusExample> {
    CORPUS.iter().find(|e| e.name == name)
}

impl CorpusExample {
    pub fn roles(&self) -> Result<Roles> {
        Roles::new(self.rec, self.sums, self.params)
    }

    pub fn hyperterm(&self) -> Result<HyperTerm> {
        parse_term(self.term, &self.roles()?)
    }

    pub fn rhs_spec(&self) -> Result<Option<RhsSpec>> {
        match self.rhs {
            None => Ok(None),
            Some((kind, src)) => {
                let term = parse_term(src, &self.roles()?)?;
                Ok(Some(match kind {
                    RhsKind::Closed => RhsSpec::Closed(term),
                    RhsKind::SingleSum => RhsSpec::SingleSum(term),
                }))
            }
        }
    }
}

/// Outcome of one corpus example.
#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub name: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

/// Run one example end to end against its golden data.
pub fn run_example(ex: &CorpusExample, opts: &SolveOptions) -> ExampleReport {
    let started = Instant::now();
    let mut details: Vec<String> = Vec::new();
    let mut pass = true;
    let check = |ok: bool, what: &str, details: &mut Vec<String>| {
        details.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, what));
        ok
    };

    let result: Result<()> = (|| {
        let f = ex.hyperterm()?;
        let vars = f.vars().clone();

        if let (Some(g1s), Some(g2s)) = (ex.golden_g1, ex.golden_g2) {
            let est = estden(&f, opts.w2_variant)?;
            let ok1 = est.g1.expand().unit_normalize()
                == parse_poly(g1s, &vars)?.unit_normalize();
            let ok2 = est.g2.expand().unit_normalize()
                == parse_poly(g2s, &vars)?.unit_normalize();
            pass &= check(ok1 && ok2, "estimated denominators", &mut details);
        }

        let cert = bizeil(&f, opts)?;
        pass &= check(cert.order == ex.order, "operator order", &mut details);

        if let Some(ds) = ex.golden_d {
            let ok = cert.d.unit_normalize() == parse_poly(ds, &vars)?.unit_normalize();
            pass &= check(ok, "common denominator d", &mut details);
        }

        if !ex.golden_coeffs.is_empty() {
            let golden = ex
                .golden_coeffs
                .iter()
                .map(|s| {
                    let p = parse_poly(s, &vars)?;
                    let pvars =
                        std::sync::Arc::new(vars[..vars.len() - 2].to_vec());
                    p.with_vars(&pvars)
                })
                .collect::<Result<Vec<_>>>()?;
            let ok = operator_eq_up_to_constant(&cert.coeffs, &golden)?;
            pass &= check(ok, "operator coefficients", &mut details);
        }

        for (golden, got, label) in [
            (ex.golden_r1, &cert.r1, "certificate R1"),
            (ex.golden_r2, &cert.r2, "certificate R2"),
        ] {
            if let Some((num, den)) = golden {
                let want = parse_ratfun(num, &vars)?.div(&parse_ratfun(den, &vars)?)?;
                pass &= check(&want == got, label, &mut details);
            }
        }

        let (ok, _residual) = certify::verify_certificate(&f, &cert)?;
        pass &= check(ok, "symbolic verification", &mut details);

        if let Some(rhs) = ex.rhs_spec()? {
            let ok = certify::identity_numeric_check(
                &f,
                &rhs,
                ex.n_range,
                &BTreeMap::new(),
            )?;
            pass &= check(ok, "identity values", &mut details);
        }
        Ok(())
    })();
    if let Err(e) = result {
        pass = false;
        details.push(format!("FAIL error: {e}"));
    }
    ExampleReport {
        name: ex.name,
        pass,
        details,
        elapsed: started.elapsed(),
    }
}

/// Timings of the three denominator choices on one example: theoretical
/// bounds, unreduced estimate, reduced candidates.
#[derive(Clone, Debug)]
pub struct PipelineTimings {
    pub theoretical: Duration,
    pub unreduced: Duration,
    pub reduced: Duration,
}

pub fn denominator_pipelines(ex: &CorpusExample) -> Result<PipelineTimings> {
    let f = ex.hyperterm()?;
    let opts = SolveOptions {
        w2_variant: W2Variant::Algorithm,
        ..SolveOptions::default()
    };

    let bounds = theorem_bound(&f)?;
    let t0 = Instant::now();
    bizeil_with(&f, &opts, vec![(bounds.g1.clone(), bounds.g2.clone())])?;
    let theoretical = t0.elapsed();

    let unreduced_opts = SolveOptions {
        reduce: false,
        ..opts.clone()
    };
    let t1 = Instant::now();
    bizeil(&f, &unreduced_opts)?;
    let unreduced = t1.elapsed();

    let t2 = Instant::now();
    bizeil(&f, &opts)?;
    let reduced = t2.elapsed();

    Ok(PipelineTimings {
        theoretical,
        unreduced,
        reduced,
    })
}
