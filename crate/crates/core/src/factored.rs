//! Products of polynomial factors with multiplicities.
//!
//! Shift quotients of hypergeometric terms arise naturally as products of
//! integer-linear factors. Keeping that structure around lets the denominator
//! estimation work with explicit factor lists instead of refactoring expanded
//! polynomials.

use std::fmt;

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::poly::{poly_gcd, Polynomial, Vars};

/// unit * prod factors[k].0 ^ factors[k].1, factors unit-normalized and
/// sorted canonically.
#[derive(Clone, PartialEq, Eq)]
pub struct Factored {
    unit: BigRational,
    factors: Vec<(Polynomial, u32)>,
    vars: Vars,
}

impl Factored {
    pub fn one(vars: &Vars) -> Self {
        Factored {
            unit: BigRational::one(),
            factors: Vec::new(),
            vars: vars.clone(),
        }
    }

    pub fn from_unit(vars: &Vars, unit: BigRational) -> Self {
        assert!(!unit.is_zero(), "factored form cannot be zero");
        Factored {
            unit,
            factors: Vec::new(),
            vars: vars.clone(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.unit.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    fn normalize(&mut self) {
        let mut merged: Vec<(Polynomial, u32)> = Vec::new();
        self.factors
            .sort_by(|a, b| a.0.canonical_cmp(&b.0));
        for (p, e) in self.factors.drain(..) {
            if e == 0 || p.is_one() {
                continue;
            }
            if let Some(last) = merged.last_mut() {
                if last.0 == p {
                    last.1 += e;
                    continue;
                }
            }
            merged.push((p, e));
        }
        self.factors = merged;
    }

    /// Multiply in p^e; p must be nonzero. Rational content of p is folded
    /// into the unit.
    pub fn push(&mut self, p: &Polynomial, e: u32) {
        assert!(!p.is_zero(), "zero factor");
        if e == 0 {
            return;
        }
        let u = p.normalization_unit();
        let mut upow = BigRational::one();
        for _ in 0..e {
            upow = upow * &u;
        }
        self.unit = &self.unit * upow;
        let p = p.scale(&u.recip());
        if !p.is_one() {
            self.factors.push((p, e));
            self.normalize();
        }
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        let mut out = self.clone();
        out.unit = &out.unit * &other.unit;
        for (p, e) in &other.factors {
            out.factors.push((p.clone(), *e));
        }
        out.normalize();
        out
    }

    pub fn scale(&mut self, c: &BigRational) {
        assert!(!c.is_zero());
        self.unit = &self.unit * c;
    }

    pub fn expand(&self) -> Polynomial {
        let mut out = Polynomial::constant(&self.vars, self.unit.clone());
        for (p, e) in &self.factors {
            for _ in 0..*e {
                out = out.mul(p);
            }
        }
        out
    }

    /// Expansion with the unit replaced by its sign, i.e. the product of the
    /// normalized factors.
    pub fn expand_primitive(&self) -> Polynomial {
        let mut out = Polynomial::one(&self.vars);
        for (p, e) in &self.factors {
            for _ in 0..*e {
                out = out.mul(p);
            }
        }
        out
    }

    pub fn total_degree(&self) -> i64 {
        self.factors
            .iter()
            .map(|(p, e)| p.total_degree() * *e as i64)
            .sum()
    }

    pub fn total_degree_in(&self, idxs: &[usize]) -> i64 {
        self.factors
            .iter()
            .map(|(p, e)| p.total_degree_in(idxs).max(0) * *e as i64)
            .sum()
    }

    pub fn shift(&self, var: &str, offset: i64) -> Factored {
        let mut out = Factored::from_unit(&self.vars, self.unit.clone());
        for (p, e) in &self.factors {
            out.push(&p.shift(var, offset), *e);
        }
        out
    }

    pub fn rename_var(&self, old: &str, new: &str) -> Result<Factored> {
        let mut out = Factored::from_unit(&self.vars, self.unit.clone());
        for (p, e) in &self.factors {
            out.push(&p.rename_var(old, new)?, *e);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Factored {
        let mut out = Factored::one(&self.vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Drop the unit (estimates are used as denominators, constants are
    /// irrelevant).
    pub fn drop_unit(&self) -> Factored {
        let mut out = self.clone();
        out.unit = BigRational::one();
        out
    }

    /// Multiplicity with which the (unit-normalized) factor q divides self.
    pub fn multiplicity_of(&self, q: &Polynomial) -> u32 {
        let qn = q.unit_normalize();
        self.factors
            .iter()
            .filter(|(p, _)| *p == qn)
            .map(|(_, e)| *e)
            .sum()
    }

    /// Refine the factor lists of `self` and `other` so that corresponding
    /// blocks are either equal or coprime, then return the factored gcd.
    pub fn gcd(&self, other: &Factored) -> Result<Factored> {
        let (a, b) = refine_pair(self, other)?;
        let mut out = Factored::one(&self.vars);
        for (p, ea) in &a.factors {
            let eb = b.multiplicity_of(p);
            if eb > 0 {
                out.push(p, (*ea).min(eb));
            }
        }
        Ok(out)
    }

    /// Exact division of factored forms. Errors if `other` does not divide.
    pub fn div_exact(&self, other: &Factored) -> Result<Factored> {
        let (a, b) = refine_pair(self, other)?;
        let mut out = Factored::from_unit(&self.vars, &a.unit / &b.unit);
        let mut remaining = b.factors.clone();
        for (p, ea) in &a.factors {
            let mut e = *ea;
            for (q, eb) in remaining.iter_mut() {
                if q == p {
                    let cancel = e.min(*eb);
                    e -= cancel;
                    *eb -= cancel;
                }
            }
            if e > 0 {
                out.push(p, e);
            }
        }
        if remaining.iter().any(|(_, e)| *e > 0) {
            return Err(Error::NonExactDivision(format!(
                "factored division {} by {}",
                self, other
            )));
        }
        Ok(out)
    }

    pub fn lcm(&self, other: &Factored) -> Result<Factored> {
        let g = self.gcd(other)?;
        self.mul(other).div_exact(&g)
    }

    /// Cancel common content between a factored numerator and denominator.
    pub fn cancel(num: &Factored, den: &Factored) -> Result<(Factored, Factored)> {
        let g = num.gcd(den)?;
        Ok((num.div_exact(&g)?, den.div_exact(&g)?))
    }

    /// Build a factored form of `poly` using the factors of `hint` as
    /// candidate divisors. Any part not explained by the hints stays as a
    /// single residual block.
    pub fn from_poly_with_hint(poly: &Polynomial, hint: &Factored) -> Result<Factored> {
        if poly.is_zero() {
            return Err(Error::Domain("cannot factor zero".into()));
        }
        let mut out = Factored::one(poly.vars());
        let mut rest = poly.clone();
        for (p, _) in &hint.factors {
            loop {
                match rest.try_div(p) {
                    Some(q) => {
                        out.push(p, 1);
                        rest = q;
                    }
                    None => break,
                }
            }
            if rest.is_constant() {
                break;
            }
        }
        if let Some(c) = rest.constant_value() {
            out.scale(&c);
        } else {
            let u = rest.normalization_unit();
            out.scale(&u);
            out.push(&rest.scale(&u.recip()), 1);
        }
        Ok(out)
    }
}

/// Refine two factored forms against each other so that any pair of blocks is
/// either identical or coprime.
fn refine_pair(a: &Factored, b: &Factored) -> Result<(Factored, Factored)> {
    let mut fa = self_refine(a)?;
    let mut fb = self_refine(b)?;
    loop {
        let mut split: Option<(Polynomial, Polynomial)> = None;
        'outer: for (p, _) in &fa.factors {
            for (q, _) in &fb.factors {
                if p == q {
                    continue;
                }
                let g = poly_gcd(p, q)?;
                if !g.is_constant() {
                    split = Some((p.clone(), g));
                    break 'outer;
                }
            }
        }
        match split {
            None => return Ok((fa, fb)),
            Some((_, g)) => {
                fa = split_by(&fa, &g)?;
                fb = split_by(&fb, &g)?;
            }
        }
    }
}

/// Refine a factored form against itself so its blocks are pairwise coprime.
fn self_refine(f: &Factored) -> Result<Factored> {
    let mut fa = f.clone();
    loop {
        let mut split: Option<Polynomial> = None;
        'outer: for (i, (p, _)) in fa.factors.iter().enumerate() {
            for (q, _) in fa.factors.iter().skip(i + 1) {
                let g = poly_gcd(p, q)?;
                if !g.is_constant() {
                    split = Some(g);
                    break 'outer;
                }
            }
        }
        match split {
            None => return Ok(fa),
            Some(g) => fa = split_by(&fa, &g)?,
        }
    }
}

/// Split every block of f divisible by g into g * cofactor.
fn split_by(f: &Factored, g: &Polynomial) -> Result<Factored> {
    let mut out = Factored::from_unit(&f.vars, f.unit.clone());
    for (p, e) in &f.factors {
        let mut rest = p.clone();
        let mut k = 0u32;
        while let Some(q) = rest.try_div(g) {
            rest = q;
            k += 1;
            if rest.is_constant() {
                break;
            }
        }
        if k == 0 {
            out.push(p, *e);
        } else {
            out.push(g, k * e);
            if !rest.is_one() && !rest.is_constant() {
                out.push(&rest, *e);
            } else if let Some(c) = rest.constant_value() {
                let mut cpow = BigRational::one();
                for _ in 0..*e {
                    cpow = cpow * &c;
                }
                out.scale(&cpow);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.unit.is_one() || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (p, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("({p})"));
            } else {
                parts.push(format!("({p})^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
