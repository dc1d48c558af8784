//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! All symbolic objects in this crate reduce to this type. Terms are kept in
//! a map ordered by graded lexicographic order under the declared variable
//! order, so equal polynomials print identically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Ordered list of symbol names shared by a family of polynomials.
pub type Vars = Arc<Vec<String>>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

/// Exponent vector aligned with a `Vars` list. Ordered by total degree,
/// ties broken lexicographically (first variable most significant).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree_in(&self, idxs: &[usize]) -> u32 {
        idxs.iter().map(|&i| self.0[i]).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub(crate) fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn br(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn int(vars: &Vars, n: i64) -> Self {
        Polynomial::constant(vars, br(n))
    }

    pub fn one(vars: &Vars) -> Self {
        Polynomial::int(vars, 1)
    }

    pub fn variable(vars: &Vars, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Domain(format!("unknown variable `{name}`")))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Polynomial::zero(vars);
        p.terms.insert(Monomial(exps), br(1));
        Ok(p)
    }

    /// Integer-linear polynomial c0 + sum c_k * x_k.
    pub fn linear(vars: &Vars, coeffs: &[(&str, i64)], c0: i64) -> Result<Self> {
        let mut p = Polynomial::int(vars, c0);
        for (name, c) in coeffs {
            p = p.add(&Polynomial::variable(vars, name)?.scale(&br(*c)));
        }
        Ok(p)
    }

    pub fn from_terms(vars: &Vars, terms: Vec<(Monomial, BigRational)>) -> Self {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "polynomial variable lists differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Multiply by a single monomial var^power.
    pub fn mul_var_pow(&self, idx: usize, power: u32) -> Self {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[idx] += power;
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Polynomial::one(&self.vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn degree_in(&self, idx: usize) -> i64 {
        self.terms
            .keys()
            .map(|m| m.0[idx] as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Total degree counting only the listed variables.
    pub fn total_degree_in(&self, idxs: &[usize]) -> i64 {
        self.terms
            .keys()
            .map(|m| m.degree_in(idxs) as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Indices of variables actually occurring.
    pub fn present_vars(&self) -> Vec<usize> {
        let n = self.vars.len();
        let mut present = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    present[i] = true;
                }
            }
        }
        (0..n).filter(|&i| present[i]).collect()
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self.var_index(name) {
            Some(i) => self.terms.keys().any(|m| m.0[i] > 0),
            None => false,
        }
    }

    /// gcd(coefficient numerators) / lcm(coefficient denominators); positive.
    pub fn rational_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num, den)
        }
    }

    /// The constant c such that self / c is integer-primitive with positive
    /// leading coefficient. Zero for the zero polynomial.
    pub fn normalization_unit(&self) -> BigRational {
        match self.leading() {
            None => BigRational::zero(),
            Some((_, lc)) => {
                let c = self.rational_content();
                if lc.is_negative() {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Canonical associate: integer-primitive, positive leading coefficient.
    pub fn unit_normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let u = self.normalization_unit();
        self.scale(&u.recip())
    }

    /// Exact polynomial division; errors if the division does not come out even.
    pub fn exact_div(&self, b: &Self) -> Result<Self> {
        self.assert_same_vars(b);
        if b.is_zero() {
            return Err(Error::Domain("division by zero polynomial".into()));
        }
        if let Some(c) = b.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let (lm_b, lc_b) = b.leading().unwrap();
        let lm_b = lm_b.clone();
        let lc_b = lc_b.clone();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.vars);
        while !rem.is_zero() {
            let (lm_r, lc_r) = rem.leading().unwrap();
            let qm = lm_r.try_div(&lm_b).ok_or_else(|| {
                Error::NonExactDivision(format!("{} by {}", self, b))
            })?;
            let qc = lc_r / &lc_b;
            // rem -= (qc * qm) * b
            for (m, c) in &b.terms {
                rem.add_term(m.mul(&qm), -(&qc * c));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    pub fn try_div(&self, b: &Self) -> Option<Self> {
        self.exact_div(b).ok()
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.try_div(self).is_some()
    }

    /// Substitute var -> var + offset and expand.
    pub fn shift(&self, name: &str, offset: i64) -> Self {
        let idx = match self.var_index(name) {
            Some(i) => i,
            None => return self.clone(),
        };
        if offset == 0 {
            return self.clone();
        }
        let maxdeg = self.degree_in(idx).max(0) as usize;
        // pascal[e][t] = C(e, t) * offset^(e-t)
        let off = br(offset);
        let mut row: Vec<BigRational> = vec![BigRational::one()];
        let mut pascal: Vec<Vec<BigRational>> = vec![row.clone()];
        for e in 1..=maxdeg {
            let mut next = vec![BigRational::zero(); e + 1];
            for t in 0..e {
                let v = &row[t] * &off;
                next[t] = &next[t] + &v;
                next[t + 1] = &next[t + 1] + &row[t];
            }
            row = next;
            pascal.push(row.clone());
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            for (t, w) in pascal[e].iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let mut exps = m.0.clone();
                exps[idx] = t as u32;
                out.add_term(Monomial(exps), c * w);
            }
        }
        out
    }

    /// Substitute var -> var + other_var (both must be in the variable list).
    pub fn shift_by_var(&self, name: &str, by: &str) -> Result<Self> {
        let idx = self
            .var_index(name)
            .ok_or_else(|| Error::Domain(format!("unknown variable `{name}`")))?;
        let bidx = self
            .var_index(by)
            .ok_or_else(|| Error::Domain(format!("unknown variable `{by}`")))?;
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            // (x + a)^e = sum_t C(e,t) x^t a^(e-t)
            let mut binom = BigRational::one();
            for t in (0..=e).rev() {
                let mut exps = m.0.clone();
                exps[idx] = t as u32;
                exps[bidx] += (e - t) as u32;
                out.add_term(Monomial(exps), c * &binom);
                if t > 0 {
                    binom = binom * br(t as i64) / br((e - t + 1) as i64);
                }
            }
        }
        Ok(out)
    }

    /// Move all exponents of `old` onto `new`. Errors if both occur.
    pub fn rename_var(&self, old: &str, new: &str) -> Result<Self> {
        let oi = self
            .var_index(old)
            .ok_or_else(|| Error::Domain(format!("unknown variable `{old}`")))?;
        let ni = self
            .var_index(new)
            .ok_or_else(|| Error::Domain(format!("unknown variable `{new}`")))?;
        if oi == ni {
            return Ok(self.clone());
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[oi] > 0 && m.0[ni] > 0 {
                return Err(Error::Domain(format!(
                    "cannot rename `{old}` to `{new}`: both occur in {self}"
                )));
            }
            let mut exps = m.0.clone();
            exps[ni] += exps[oi];
            exps[oi] = 0;
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Re-express over a larger (or reordered) variable list containing all
    /// variables that occur here.
    pub fn with_vars(&self, target: &Vars) -> Result<Self> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v))
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] += e,
                    None => {
                        return Err(Error::Domain(format!(
                            "variable `{}` missing from target list",
                            self.vars[i]
                        )))
                    }
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, assign: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let vals: Vec<Option<&BigRational>> =
            self.vars.iter().map(|v| assign.get(v)).collect();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = vals[i].ok_or_else(|| {
                    Error::Eval(format!("unassigned variable `{}`", self.vars[i]))
                })?;
                for _ in 0..e {
                    v = v * x;
                }
            }
            total = total + v;
        }
        Ok(total)
    }

    /// Group terms by their exponents in `main` variables. Keys have all
    /// non-main exponents zeroed; values live over the same variable list
    /// with main exponents zeroed.
    pub fn coeffs_wrt(&self, main: &[usize]) -> BTreeMap<Monomial, Polynomial> {
        let is_main: Vec<bool> = {
            let mut v = vec![false; self.vars.len()];
            for &i in main {
                v[i] = true;
            }
            v
        };
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = vec![0u32; self.vars.len()];
            let mut rest = vec![0u32; self.vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if is_main[i] {
                    key[i] = e;
                } else {
                    rest[i] = e;
                }
            }
            out.entry(Monomial(key))
                .or_insert_with(|| Polynomial::zero(&self.vars))
                .add_term(Monomial(rest), c.clone());
        }
        out
    }

    /// Content and primitive part viewing self as a polynomial in `main`.
    pub fn content_primitive(&self, main: &[&str]) -> Result<(Polynomial, Polynomial)> {
        if self.is_zero() {
            return Err(Error::Domain("content of zero polynomial".into()));
        }
        let idxs: Vec<usize> = main
            .iter()
            .map(|n| {
                self.var_index(n)
                    .ok_or_else(|| Error::Domain(format!("unknown variable `{n}`")))
            })
            .collect::<Result<_>>()?;
        let groups = self.coeffs_wrt(&idxs);
        let mut content: Option<Polynomial> = None;
        for coeff in groups.values() {
            content = Some(match content {
                None => coeff.unit_normalize(),
                Some(g) => poly_gcd(&g, coeff)?,
            });
            if content.as_ref().map(|g| g.is_one()).unwrap_or(false) {
                break;
            }
        }
        let content = content.unwrap();
        let primitive = self.exact_div(&content)?;
        Ok((content, primitive))
    }

    /// Deterministic total order used for candidate sorting: graded-lex on
    /// leading monomials, then term-by-term.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[i].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn degree_wrt(p: &Polynomial, idx: usize) -> i64 {
    p.degree_in(idx)
}

/// Coefficient of x^k viewing p as a polynomial in variable `idx`.
fn coeff_of_power(p: &Polynomial, idx: usize, k: u32) -> Polynomial {
    let mut out = Polynomial::zero(p.vars());
    for (m, c) in p.terms() {
        if m.0[idx] == k {
            let mut exps = m.0.clone();
            exps[idx] = 0;
            out.add_term(Monomial(exps), c.clone());
        }
    }
    out
}

/// Content of p with respect to variable `idx` (gcd of its coefficients).
fn content_wrt(p: &Polynomial, idx: usize) -> Result<Polynomial> {
    let d = degree_wrt(p, idx);
    let mut content: Option<Polynomial> = None;
    for k in 0..=d.max(0) as u32 {
        let c = coeff_of_power(p, idx, k);
        if c.is_zero() {
            continue;
        }
        content = Some(match content {
            None => c.unit_normalize(),
            Some(g) => gcd_rec(&g, &c)?,
        });
        if content.as_ref().unwrap().is_one() {
            break;
        }
    }
    Ok(content.unwrap_or_else(|| Polynomial::one(p.vars())))
}

fn pseudo_rem(f: &Polynomial, g: &Polynomial, idx: usize) -> Polynomial {
    let dg = degree_wrt(g, idx);
    let lcg = coeff_of_power(g, idx, dg as u32);
    let mut r = f.clone();
    while !r.is_zero() && degree_wrt(&r, idx) >= dg {
        let dr = degree_wrt(&r, idx);
        let lcr = coeff_of_power(&r, idx, dr as u32);
        // r := lcg * r - lcr * x^(dr-dg) * g
        r = lcg
            .mul(&r)
            .sub(&lcr.mul_var_pow(idx, (dr - dg) as u32).mul(g));
    }
    r
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.is_zero() {
        return Ok(b.unit_normalize());
    }
    if b.is_zero() {
        return Ok(a.unit_normalize());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Polynomial::one(a.vars()));
    }
    let pa = a.present_vars();
    let pb = b.present_vars();
    let common: Vec<usize> = pa.iter().copied().filter(|i| pb.contains(i)).collect();
    if common.is_empty() {
        // no shared variable: gcd divides the content of either side
        let ca = content_wrt(a, pa[0])?;
        return gcd_rec(&ca, b);
    }
    // main variable: smallest min-degree, tie broken by latest declared
    let main = *common
        .iter()
        .min_by_key(|&&i| {
            (
                degree_wrt(a, i).min(degree_wrt(b, i)),
                usize::MAX - i,
            )
        })
        .unwrap();
    let ca = content_wrt(a, main)?;
    let cb = content_wrt(b, main)?;
    let fa = a.exact_div(&ca)?;
    let fb = b.exact_div(&cb)?;
    let cg = gcd_rec(&ca, &cb)?;
    let (mut f, mut g) = if degree_wrt(&fa, main) >= degree_wrt(&fb, main) {
        (fa, fb)
    } else {
        (fb, fa)
    };
    loop {
        let r = pseudo_rem(&f, &g, main);
        if r.is_zero() {
            break;
        }
        let rc = content_wrt(&r, main)?;
        let r = r.exact_div(&rc)?.unit_normalize();
        f = g;
        g = r;
        if degree_wrt(&g, main) == 0 {
            return Ok(cg);
        }
    }
    let gc = content_wrt(&g, main)?;
    let g = g.exact_div(&gc)?;
    Ok(cg.mul(&g).unit_normalize())
}

/// Greatest common divisor, unit-normalized (integer-primitive, positive
/// leading coefficient under graded-lex).
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("gcd of two zero polynomials".into()));
    }
    if a.is_zero() || b.is_zero() || a.is_constant() || b.is_constant() {
        return gcd_rec(a, b);
    }
    // The modular path is fast on the dense multivariate inputs that make
    // the subresultant recursion swell; it proves its answer by exact trial
    // division, so falling back is only ever a performance decision.
    if let Some(g) = crate::modgcd::modular_gcd(a, b) {
        return Ok(g);
    }
    gcd_rec(a, b)
}

pub fn poly_lcm(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("lcm with zero polynomial".into()));
    }
    let g = poly_gcd(a, b)?;
    Ok(a.mul(b).exact_div(&g)?.unit_normalize())
}

/// A variable name guaranteed not to collide with the given list.
pub fn fresh_var_name(vars: &Vars) -> String {
    let mut k = 0;
    loop {
        let name = format!("_s{k}");
        if !vars.iter().any(|v| v == &name) {
            return name;
        }
        k += 1;
    }
}

/// Maximal factor of `f` depending only on the variables in `deps`, computed
/// by gcd of f with f shifted by a fresh symbol in each excluded variable.
pub fn max_factor_free_of(f: &Polynomial, deps: &[&str]) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(Error::Domain("max factor of zero polynomial".into()));
    }
    let present = f.present_vars();
    let excluded: Vec<String> = present
        .iter()
        .map(|&i| f.vars()[i].clone())
        .filter(|v| !deps.iter().any(|d| d == v))
        .collect();
    if excluded.is_empty() {
        return Ok(f.unit_normalize());
    }
    let fresh = fresh_var_name(f.vars());
    let mut ext: Vec<String> = f.vars().as_ref().clone();
    ext.push(fresh.clone());
    let ext: Vars = Arc::new(ext);
    let mut g = f.with_vars(&ext)?;
    for z in &excluded {
        if !g.depends_on(z) {
            continue;
        }
        let shifted = g.shift_by_var(z, &fresh)?;
        g = gcd_rec(&g, &shifted)?;
    }
    g.with_vars(f.vars()).map(|p| p.unit_normalize())
}

/// Maximal factor of `f` that actually involves `var` (the cofactor of the
/// var-free part).
pub fn factor_depending_on(f: &Polynomial, var: &str) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(Error::Domain("factor of zero polynomial".into()));
    }
    let deps: Vec<&str> = f
        .vars()
        .iter()
        .map(|s| s.as_str())
        .filter(|v| *v != var)
        .collect();
    let free = max_factor_free_of(f, &deps)?;
    Ok(f.exact_div(&free)?.unit_normalize())
}
