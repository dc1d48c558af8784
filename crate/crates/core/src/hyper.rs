//! Structured hypergeometric terms over two summation variables.
//!
//! A term is a product of binomial, factorial and geometric atoms over
//! integer-linear forms, times a polynomial prefactor. Integer linearity
//! guarantees that every unit shift of a declared variable multiplies the
//! term by a rational function, which is what the telescoping machinery
//! consumes.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factored::Factored;
use crate::poly::{br, Polynomial, Vars};
use crate::ratfun::RationalFunction;

/// c0 + sum c_k * x_k with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinearForm {
    pub coeffs: BTreeMap<String, i64>,
    pub constant: i64,
}

impl LinearForm {
    pub fn constant(c: i64) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), 1);
        LinearForm {
            coeffs,
            constant: 0,
        }
    }

    pub fn coeff(&self, name: &str) -> i64 {
        self.coeffs.get(name).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant += other.constant;
        for (k, v) in &other.coeffs {
            let e = out.coeffs.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                out.coeffs.remove(k);
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return LinearForm::constant(0);
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            constant: self.constant * c,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn add_const(&self, c: i64) -> Self {
        let mut out = self.clone();
        out.constant += c;
        out
    }

    pub fn to_poly(&self, vars: &Vars) -> Result<Polynomial> {
        let pairs: Vec<(&str, i64)> = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.as_str(), *v))
            .collect();
        Polynomial::linear(vars, &pairs, self.constant)
    }

    pub fn eval(&self, point: &BTreeMap<String, BigInt>) -> Result<BigInt> {
        let mut total = BigInt::from(self.constant);
        for (k, v) in &self.coeffs {
            let x = point
                .get(k)
                .ok_or_else(|| Error::Eval(format!("unassigned symbol `{k}`")))?;
            total += x * BigInt::from(*v);
        }
        Ok(total)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.coeffs {
            if *v == 0 {
                continue;
            }
            if first {
                if *v < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if *v < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if v.abs() != 1 {
                write!(f, "{}*", v.abs())?;
            }
            write!(f, "{k}")?;
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if self.constant != 0 {
            if self.constant < 0 {
                write!(f, " - {}", -self.constant)?;
            } else {
                write!(f, " + {}", self.constant)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AtomKind {
    /// binom(top, bottom)
    Binomial(LinearForm, LinearForm),
    /// fact(arg)
    Factorial(LinearForm),
    /// base ^ arg, base a nonzero rational
    Geometric(BigRational, LinearForm),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom {
    pub kind: AtomKind,
    pub exp: i64,
}

/// Which symbol plays which part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Roles {
    pub rec: String,
    pub sums: [String; 2],
    pub params: Vec<String>,
}

impl Roles {
    pub fn new(rec: &str, sums: [&str; 2], params: &[&str]) -> Result<Self> {
        let mut all: Vec<&str> = vec![rec, sums[0], sums[1]];
        all.extend(params);
        for (i, a) in all.iter().enumerate() {
            for b in all.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::Domain(format!(
                        "symbol `{a}` declared in more than one role"
                    )));
                }
            }
        }
        Ok(Roles {
            rec: rec.to_string(),
            sums: [sums[0].to_string(), sums[1].to_string()],
            params: params.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// Declared variable order: recurrence variable, parameters, summation
    /// variables. All canonical forms use this order.
    pub fn vars(&self) -> Vars {
        let mut v = vec![self.rec.clone()];
        v.extend(self.params.iter().cloned());
        v.push(self.sums[0].clone());
        v.push(self.sums[1].clone());
        std::sync::Arc::new(v)
    }

    pub fn all_symbols(&self) -> Vec<String> {
        self.vars().as_ref().clone()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HyperTerm {
    pub atoms: Vec<Atom>,
    pub prefactor: Polynomial,
    pub roles: Roles,
    vars: Vars,
}

/// Rising-factorial style product: multiplies the quotient Γ(X+m)/Γ(X) into
/// a factored numerator/denominator pair.
fn push_gamma_quotient(
    num: &mut Factored,
    den: &mut Factored,
    x: &LinearForm,
    m: i64,
    vars: &Vars,
) -> Result<()> {
    if m >= 0 {
        for t in 0..m {
            num.push(&x.add_const(t).to_poly(vars)?, 1);
        }
    } else {
        for t in 1..=(-m) {
            den.push(&x.add_const(-t).to_poly(vars)?, 1);
        }
    }
    Ok(())
}

impl HyperTerm {
    pub fn new(atoms: Vec<Atom>, prefactor: Polynomial, roles: Roles) -> Result<Self> {
        let vars = roles.vars();
        for atom in &atoms {
            if atom.exp == 0 {
                return Err(Error::Domain("atom exponent must be nonzero".into()));
            }
            if let AtomKind::Geometric(base, _) = &atom.kind {
                if base.is_zero() {
                    return Err(Error::Domain("geometric base must be nonzero".into()));
                }
            }
        }
        if prefactor.is_zero() {
            return Err(Error::Domain("zero prefactor".into()));
        }
        let prefactor = prefactor.with_vars(&vars)?;
        Ok(HyperTerm {
            atoms,
            prefactor,
            roles,
            vars,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn sum_var_indices(&self) -> [usize; 2] {
        let i = self
            .vars
            .iter()
            .position(|v| *v == self.roles.sums[0])
            .unwrap();
        let j = self
            .vars
            .iter()
            .position(|v| *v == self.roles.sums[1])
            .unwrap();
        [i, j]
    }

    /// F(..., var+k, ...) / F(...) as a factored numerator/denominator pair,
    /// not yet reduced to coprime form.
    pub fn shift_quotient_factored(
        &self,
        var: &str,
        k: i64,
    ) -> Result<(Factored, Factored)> {
        let mut num = Factored::one(&self.vars);
        let mut den = Factored::one(&self.vars);
        if k == 0 {
            return Ok((num, den));
        }
        for atom in &self.atoms {
            let mut anum = Factored::one(&self.vars);
            let mut aden = Factored::one(&self.vars);
            match &atom.kind {
                AtomKind::Binomial(top, bot) => {
                    let a = top.coeff(var) * k;
                    let b = bot.coeff(var) * k;
                    push_gamma_quotient(&mut anum, &mut aden, &top.add_const(1), a, &self.vars)?;
                    push_gamma_quotient(&mut aden, &mut anum, &bot.add_const(1), b, &self.vars)?;
                    let diff = top.sub(bot).add_const(1);
                    push_gamma_quotient(&mut aden, &mut anum, &diff, a - b, &self.vars)?;
                }
                AtomKind::Factorial(arg) => {
                    let m = arg.coeff(var) * k;
                    push_gamma_quotient(&mut anum, &mut aden, &arg.add_const(1), m, &self.vars)?;
                }
                AtomKind::Geometric(base, arg) => {
                    let m = arg.coeff(var) * k;
                    let mut c = BigRational::one();
                    if m >= 0 {
                        for _ in 0..m {
                            c = c * base;
                        }
                    } else {
                        for _ in 0..(-m) {
                            c = c / base;
                        }
                    }
                    anum.scale(&c);
                }
            }
            let e = atom.exp;
            let (anum, aden) = if e < 0 { (aden, anum) } else { (anum, aden) };
            num = num.mul(&anum.pow(e.unsigned_abs() as u32));
            den = den.mul(&aden.pow(e.unsigned_abs() as u32));
        }
        if !self.prefactor.is_one() {
            let shifted = self.prefactor.shift(var, k);
            if shifted.is_zero() {
                return Err(Error::Domain(
                    "prefactor vanishes identically under shift".into(),
                ));
            }
            num.push(&shifted, 1);
            den.push(&self.prefactor, 1);
        }
        Factored::cancel(&num, &den)
    }

    /// Reduced rational-function shift quotient.
    pub fn shift_quotient(&self, var: &str, k: i64) -> Result<RationalFunction> {
        let (num, den) = self.shift_quotient_factored(var, k)?;
        RationalFunction::new(num.expand(), den.expand())
    }

    /// Quotient data for a telescoping attempt of order r.
    pub fn quotient_set(&self, r: usize) -> Result<QuotientSet> {
        let (inum, iden) = self.shift_quotient_factored(&self.roles.sums[0], 1)?;
        let (jnum, jden) = self.shift_quotient_factored(&self.roles.sums[1], 1)?;
        let mut q = Vec::with_capacity(r);
        let mut dens: Vec<Factored> = Vec::with_capacity(r);
        for l in 1..=r {
            let (qn, qd) = self.shift_quotient_factored(&self.roles.rec, l as i64)?;
            q.push((qn, qd.clone()));
            dens.push(qd);
        }
        let mut d = Factored::one(&self.vars);
        for qd in &dens {
            d = d.lcm(qd)?;
        }
        let d = d.drop_unit();
        // numerators of q_l over the common denominator d
        let mut q_over_d = Vec::with_capacity(r);
        for (qn, qd) in &q {
            let cof = d.div_exact(qd)?;
            q_over_d.push(qn.mul(&cof));
        }
        Ok(QuotientSet {
            r1: inum.clone(),
            s1: iden.clone(),
            r2: jnum.clone(),
            s2: jden.clone(),
            q,
            q_over_d,
            d,
        })
    }

    /// Exact value at an integer point.
    pub fn eval(&self, point: &BTreeMap<String, BigInt>) -> Result<BigRational> {
        let mut total = BigRational::one();
        for atom in &self.atoms {
            let v = match &atom.kind {
                AtomKind::Binomial(top, bot) => {
                    let a = top.eval(point)?;
                    let b = bot.eval(point)?;
                    eval_binomial(&a, &b)
                }
                AtomKind::Factorial(arg) => {
                    let m = arg.eval(point)?;
                    if m.is_negative() {
                        return Err(Error::Eval(format!(
                            "fact({arg}) at a negative integer ({m}) at point {point:?}"
                        )));
                    }
                    let mut f = BigRational::one();
                    let mut t = BigInt::one();
                    while t <= m {
                        f = f * BigRational::from_integer(t.clone());
                        t += 1;
                    }
                    f
                }
                AtomKind::Geometric(base, arg) => {
                    let m = arg.eval(point)?;
                    rational_pow(base, &m)?
                }
            };
            if v.is_zero() && atom.exp < 0 {
                return Err(Error::Eval(format!(
                    "zero atom raised to negative power at point {point:?}"
                )));
            }
            if v.is_zero() {
                return Ok(BigRational::zero());
            }
            total = total * rational_pow(&v, &BigInt::from(atom.exp))?;
        }
        let assign: BTreeMap<String, BigRational> = point
            .iter()
            .map(|(k, v)| (k.clone(), BigRational::from_integer(v.clone())))
            .collect();
        Ok(total * self.prefactor.eval(&assign)?)
    }

    /// Exact double sum over a rectangular grid of the summation variables.
    pub fn eval_sum(
        &self,
        ranges: [(i64, i64); 2],
        point: &BTreeMap<String, BigInt>,
    ) -> Result<BigRational> {
        let mut total = BigRational::zero();
        let mut p = point.clone();
        for i in ranges[0].0..=ranges[0].1 {
            p.insert(self.roles.sums[0].clone(), BigInt::from(i));
            for j in ranges[1].0..=ranges[1].1 {
                p.insert(self.roles.sums[1].clone(), BigInt::from(j));
                total = total + self.eval(&p)?;
            }
        }
        Ok(total)
    }
}

/// binom(a, b) for arbitrary integers: 0 when b < 0, otherwise the
/// polynomial extension a(a-1)...(a-b+1)/b!.
pub fn eval_binomial(a: &BigInt, b: &BigInt) -> BigRational {
    if b.is_negative() {
        return BigRational::zero();
    }
    let mut num = BigRational::one();
    let mut t = BigInt::zero();
    while &t < b {
        num = num * BigRational::from_integer(a - &t);
        t += 1;
        num = num / BigRational::from_integer(t.clone());
    }
    num
}

fn rational_pow(base: &BigRational, e: &BigInt) -> Result<BigRational> {
    if base.is_zero() {
        if e.is_negative() {
            return Err(Error::Eval("0 raised to a negative power".into()));
        }
        return Ok(if e.is_zero() {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    let mut out = BigRational::one();
    let mut t = BigInt::zero();
    let abs = e.abs();
    while t < abs {
        out = out * base;
        t += 1;
    }
    if e.is_negative() {
        out = out.recip();
    }
    Ok(out)
}

/// Unit-shift quotients in the two summation variables, the recurrence-shift
/// quotients up to the requested order, and their common denominator.
#[derive(Clone, Debug)]
pub struct QuotientSet {
    /// numerator of F(i+1)/F
    pub r1: Factored,
    /// denominator of F(i+1)/F
    pub s1: Factored,
    /// numerator of F(j+1)/F
    pub r2: Factored,
    /// denominator of F(j+1)/F
    pub s2: Factored,
    /// (numerator, denominator) of F(n+l)/F for l = 1..=r
    pub q: Vec<(Factored, Factored)>,
    /// numerator of q_l over the common denominator d
    pub q_over_d: Vec<Factored>,
    /// common denominator of the recurrence quotients (1 for r = 0)
    pub d: Factored,
}

impl QuotientSet {
    pub fn r1_poly(&self) -> Polynomial {
        self.r1.expand()
    }
    pub fn s1_poly(&self) -> Polynomial {
        self.s1.expand()
    }
    pub fn r2_poly(&self) -> Polynomial {
        self.r2.expand()
    }
    pub fn s2_poly(&self) -> Polynomial {
        self.s2.expand()
    }
    pub fn d_poly(&self) -> Polynomial {
        self.d.expand()
    }

    pub fn quotients(&self) -> Result<Vec<RationalFunction>> {
        self.q
            .iter()
            .map(|(n, d)| RationalFunction::new(n.expand(), d.expand()))
            .collect()
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::Binomial(t, b) => write!(f, "binom({t}, {b})"),
            AtomKind::Factorial(a) => write!(f, "fact({a})"),
            AtomKind::Geometric(c, a) => write!(f, "({c})^({a})"),
        }
    }
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.prefactor.is_one() {
            parts.push(format!("({})", self.prefactor));
        }
        for atom in &self.atoms {
            if atom.exp == 1 {
                parts.push(atom.kind.to_string());
            } else {
                parts.push(format!("{}^{}", atom.kind, atom.exp));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Convenience for building rational constants in atom construction.
pub fn rat(n: i64, d: i64) -> BigRational {
    br(n) / br(d)
}
