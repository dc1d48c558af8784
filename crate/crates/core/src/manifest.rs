//! JSON problem manifests and certificate documents. Polynomials cross this
//! boundary as canonical strings only.

use serde::{Deserialize, Serialize};

use crate::certify::RhsSpec;
use crate::denest::W2Variant;
use crate::error::{Error, Result};
use crate::hyper::{HyperTerm, Roles};
use crate::parse::{parse_poly, parse_ratfun, parse_term};
use crate::ratfun::RationalFunction;
use crate::telescope::{Certificate, SolveOptions};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemManifest {
    pub term: String,
    pub rec_var: String,
    pub sum_vars: [String; 2],
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub rhs: Option<RhsDoc>,
    #[serde(default)]
    pub options: OptionsDoc,
    #[serde(default)]
    pub n_range: Option<(i64, i64)>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RhsDoc {
    /// "closed" or "single-sum"
    pub kind: String,
    pub term: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptionsDoc {
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    #[serde(default = "default_true")]
    pub reduce: bool,
    /// "algorithm" or "theorem"
    #[serde(default = "default_w2")]
    pub w2_variant: String,
}

fn default_max_order() -> usize {
    6
}

fn default_true() -> bool {
    true
}

fn default_w2() -> String {
    "algorithm".into()
}

impl Default for OptionsDoc {
    fn default() -> Self {
        OptionsDoc {
            max_order: default_max_order(),
            reduce: true,
            w2_variant: default_w2(),
        }
    }
}

impl ProblemManifest {
    pub fn from_json(src: &str) -> Result<Self> {
        let m: ProblemManifest = serde_json::from_str(src)?;
        m.roles()?;
        Ok(m)
    }

    pub fn roles(&self) -> Result<Roles> {
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        Roles::new(
            &self.rec_var,
            [&self.sum_vars[0], &self.sum_vars[1]],
            &params,
        )
    }

    pub fn hyperterm(&self) -> Result<HyperTerm> {
        parse_term(&self.term, &self.roles()?)
    }

    pub fn solve_options(&self) -> Result<SolveOptions> {
        let w2_variant = match self.options.w2_variant.as_str() {
            "algorithm" => W2Variant::Algorithm,
            "theorem" => W2Variant::Theorem,
            other => {
                return Err(Error::Manifest(format!(
                    "unknown w2 variant `{other}` (expected algorithm or theorem)"
                )))
            }
        };
        Ok(SolveOptions {
            max_order: self.options.max_order,
            reduce: self.options.reduce,
            w2_variant,
            ..SolveOptions::default()
        })
    }

    pub fn rhs_spec(&self) -> Result<Option<RhsSpec>> {
        let Some(doc) = &self.rhs else {
            return Ok(None);
        };
        let term = parse_term(&doc.term, &self.roles()?)?;
        match doc.kind.as_str() {
            "closed" => Ok(Some(RhsSpec::Closed(term))),
            "single-sum" => Ok(Some(RhsSpec::SingleSum(term))),
            other => Err(Error::Manifest(format!(
                "unknown rhs kind `{other}` (expected closed or single-sum)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatDoc {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub shift_var: String,
    pub order: usize,
    pub coeffs: Vec<String>,
    #[serde(rename = "R1")]
    pub r1: RatDoc,
    #[serde(rename = "R2")]
    pub r2: RatDoc,
    pub d: String,
    pub g1: String,
    pub g2: String,
    pub f1: String,
    pub f2: String,
    pub search_trace: Vec<String>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let rat = |r: &RationalFunction| RatDoc {
            num: r.num().to_string(),
            den: r.den().to_string(),
        };
        CertificateDoc {
            shift_var: cert.shift_var.clone(),
            order: cert.order,
            coeffs: cert.coeffs.iter().map(|p| p.to_string()).collect(),
            r1: rat(&cert.r1),
            r2: rat(&cert.r2),
            d: cert.d.to_string(),
            g1: cert.g1.to_string(),
            g2: cert.g2.to_string(),
            f1: cert.f1.to_string(),
            f2: cert.f2.to_string(),
            search_trace: cert.trace.clone(),
        }
    }

    pub fn to_certificate(&self, roles: &Roles) -> Result<Certificate> {
        let vars = roles.vars();
        let pvars = std::sync::Arc::new(vars[..vars.len() - 2].to_vec());
        let rat = |doc: &RatDoc| -> Result<RationalFunction> {
            let num = parse_ratfun(&doc.num, &vars)?;
            let den = parse_ratfun(&doc.den, &vars)?;
            num.div(&den)
        };
        Ok(Certificate {
            shift_var: self.shift_var.clone(),
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|s| parse_poly(s, &pvars))
                .collect::<Result<_>>()?,
            r1: rat(&self.r1)?,
            r2: rat(&self.r2)?,
            d: parse_poly(&self.d, &vars)?,
            g1: parse_poly(&self.g1, &vars)?,
            g2: parse_poly(&self.g2, &vars)?,
            f1: parse_poly(&self.f1, &vars)?,
            f2: parse_poly(&self.f2, &vars)?,
            trace: self.search_trace.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }
}
