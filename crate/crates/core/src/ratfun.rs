//! Reduced rational functions: quotients of coprime polynomials with
//! unit-normalized denominator.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::poly::{poly_gcd, poly_lcm, Polynomial, Vars};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        let mut rf = RationalFunction { num, den };
        rf.reduce()?;
        Ok(rf)
    }

    fn reduce(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = Polynomial::one(self.den.vars());
            return Ok(());
        }
        let g = poly_gcd(&self.num, &self.den)?;
        if !g.is_one() {
            self.num = self.num.exact_div(&g)?;
            self.den = self.den.exact_div(&g)?;
        }
        let u = self.den.normalization_unit();
        if !u.is_one() {
            self.den = self.den.scale(&u.recip());
            self.num = self.num.scale(&u.recip());
        }
        Ok(())
    }

    /// Build from parts already known to be coprime, skipping the gcd.
    /// Only the zero shortcut and denominator unit normalization apply.
    pub fn from_coprime(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero(num.vars()));
        }
        let u = den.normalization_unit();
        let (num, den) = if u.is_one() {
            (num, den)
        } else {
            (num.scale(&u.recip()), den.scale(&u.recip()))
        };
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        RationalFunction::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        RationalFunction::from_poly(Polynomial::one(vars))
    }

    pub fn int(vars: &Vars, n: i64) -> Self {
        RationalFunction::from_poly(Polynomial::int(vars, n))
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(vars, c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let g = poly_gcd(&self.den, &other.den)?;
        let ra = other.den.exact_div(&g)?;
        let rb = self.den.exact_div(&g)?;
        let num = self.num.mul(&ra).add(&other.num.mul(&rb));
        let den = self.den.mul(&ra);
        RationalFunction::new(num, den)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        // cross-cancel before multiplying to keep intermediates small
        if self.is_zero() || other.is_zero() {
            return Ok(RationalFunction::zero(self.vars()));
        }
        let g1 = poly_gcd(&self.num, &other.den)?;
        let g2 = poly_gcd(&other.num, &self.den)?;
        let n1 = self.num.exact_div(&g1)?;
        let d2 = other.den.exact_div(&g1)?;
        let n2 = other.num.exact_div(&g2)?;
        let d1 = self.den.exact_div(&g2)?;
        RationalFunction::new(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero rational function".into()));
        }
        self.mul(&RationalFunction {
            num: other.den.clone(),
            den: other.num.clone(),
        })
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<Self> {
        self.mul(&RationalFunction::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut out = RationalFunction::one(self.vars());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    pub fn shift(&self, var: &str, offset: i64) -> Result<Self> {
        RationalFunction::new(self.num.shift(var, offset), self.den.shift(var, offset))
    }

    /// Evaluate at a rational point; errors if the denominator vanishes.
    pub fn eval(&self, assign: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let d = self.den.eval(assign)?;
        if d.is_zero() {
            return Err(Error::Eval(format!("denominator {} vanishes", self.den)));
        }
        Ok(self.num.eval(assign)? / d)
    }

    pub fn den_nonzero_at(&self, assign: &BTreeMap<String, BigRational>) -> bool {
        self.den
            .eval(assign)
            .map(|v| !v.is_zero())
            .unwrap_or(false)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Least common multiple of the denominators of a family of rational
/// functions.
pub fn common_denominator(items: &[RationalFunction], vars: &Vars) -> Result<Polynomial> {
    let mut d = Polynomial::one(vars);
    for it in items {
        if it.den().is_one() {
            continue;
        }
        d = poly_lcm(&d, it.den())?;
    }
    Ok(d)
}
