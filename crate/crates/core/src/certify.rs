//! Independent certificate verification: an exact symbolic identity check,
//! randomized exact numeric spot checks, and numeric annihilation of the
//! actual double sum.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factored::Factored;
use crate::hyper::HyperTerm;
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::telescope::Certificate;

fn validate(cert: &Certificate) -> Result<()> {
    if cert.coeffs.len() != cert.order + 1 {
        return Err(Error::Contract(format!(
            "certificate order {} does not match {} coefficients",
            cert.order,
            cert.coeffs.len()
        )));
    }
    if cert.coeffs.iter().all(|p| p.is_zero()) {
        return Err(Error::Contract(
            "certificate has all operator coefficients zero".into(),
        ));
    }
    Ok(())
}

/// Exact symbolic check of the telescoping identity. Returns the truth value
/// together with the residual rational function (zero iff valid).
///
/// The whole identity is brought over one least common denominator built
/// from the factored shift-quotient blocks, so only products of moderate
/// cofactors are formed — no large multivariate gcds. A nonzero residual is
/// returned without reduction; it is diagnostic only.
pub fn verify_certificate(
    f: &HyperTerm,
    cert: &Certificate,
) -> Result<(bool, RationalFunction)> {
    validate(cert)?;
    let vars = f.vars().clone();
    let i = f.roles.sums[0].as_str();
    let j = f.roles.sums[1].as_str();

    let qs = f.quotient_set(cert.order)?;
    let d = &qs.d;
    let d_poly = qs.d_poly();

    // Present each certificate as R = fk / (d * gk); any split works, so
    // take gk = den(R) and fk = num(R) * d without consulting the
    // certificate's own (redundant) presentation fields.
    let mut g1 = Factored::one(&vars);
    g1.push(cert.r1.den(), 1);
    let mut g2 = Factored::one(&vars);
    g2.push(cert.r2.den(), 1);
    let f1 = cert.r1.num().mul(&d_poly);
    let f2 = cert.r2.num().mul(&d_poly);

    // Common denominator of L(F)/F and both difference parts, kept in
    // factored form so the cofactors below stay small.
    let den1 = qs.s1.mul(&d.shift(i, 1)).mul(&g1.shift(i, 1));
    let den0a = d.mul(&g1);
    let den2 = qs.s2.mul(&d.shift(j, 1)).mul(&g2.shift(j, 1));
    let den0b = d.mul(&g2);
    let big = d
        .lcm(&den1)?
        .lcm(&den0a)?
        .lcm(&den2)?
        .lcm(&den0b)?
        .drop_unit();

    let a_cof = big.div_exact(d)?;
    let a_poly = qs.r1.mul(&big.div_exact(&den1)?).expand();
    let b_poly = big.div_exact(&den0a)?.expand();
    let c_poly = qs.r2.mul(&big.div_exact(&den2)?).expand();
    let b2_poly = big.div_exact(&den0b)?.expand();

    // residual * big = Σ_l a_l q_l big − Δ_i(R1 F)/F big − Δ_j(R2 F)/F big
    let mut num = Polynomial::zero(&vars);
    for (l, a) in cert.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = a.with_vars(&vars)?;
        let col = if l == 0 {
            big.expand()
        } else {
            qs.q_over_d[l - 1].mul(&a_cof).expand()
        };
        num = num.add(&a.mul(&col));
    }
    num = num.add(&f1.mul(&b_poly)).sub(&f1.shift(i, 1).mul(&a_poly));
    num = num.add(&f2.mul(&b2_poly)).sub(&f2.shift(j, 1).mul(&c_poly));

    if num.is_zero() {
        return Ok((true, RationalFunction::zero(&vars)));
    }
    Ok((false, RationalFunction::from_coprime(num, big.expand())?))
}

fn to_rat_map(point: &BTreeMap<String, BigInt>) -> BTreeMap<String, BigRational> {
    point
        .iter()
        .map(|(k, v)| (k.clone(), BigRational::from_integer(v.clone())))
        .collect()
}

/// One exact evaluation of the telescoping identity at an integer point.
/// Errors signal an inadmissible point (denominator zero or undefined atom).
fn check_point(
    f: &HyperTerm,
    cert: &Certificate,
    point: &BTreeMap<String, BigInt>,
) -> Result<bool> {
    let i = &f.roles.sums[0];
    let j = &f.roles.sums[1];
    let rec = &f.roles.rec;
    let ratpt = to_rat_map(point);

    let mut lhs = BigRational::zero();
    for (l, a) in cert.coeffs.iter().enumerate() {
        let mut shifted = point.clone();
        shifted.insert(rec.clone(), &point[rec] + BigInt::from(l));
        lhs += a.eval(&ratpt)? * f.eval(&shifted)?;
    }

    let mut rhs = BigRational::zero();
    for (r, var) in [(&cert.r1, i), (&cert.r2, j)] {
        let mut up = point.clone();
        up.insert(var.to_string(), &point[var.as_str()] + BigInt::from(1));
        let upr = to_rat_map(&up);
        rhs += r.eval(&upr)? * f.eval(&up)? - r.eval(&ratpt)? * f.eval(point)?;
    }
    Ok(lhs == rhs)
}

/// Randomized exact spot check at integer points avoiding denominator zeros.
/// Deterministic for a fixed seed. Errors with `Inconclusive` if no
/// admissible point can be found.
pub fn verify_numeric(
    f: &HyperTerm,
    cert: &Certificate,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    validate(cert)?;
    if trials == 0 {
        return Err(Error::Domain("at least one trial required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = cert.order as i64 + 2;
    for _ in 0..trials {
        let mut found = false;
        for _ in 0..100 {
            let n = rng.gen_range(lo..=lo + 50);
            let mut point: BTreeMap<String, BigInt> = BTreeMap::new();
            point.insert(f.roles.rec.clone(), BigInt::from(n));
            for p in &f.roles.params {
                point.insert(p.clone(), BigInt::from(rng.gen_range(1..=12i64)));
            }
            let hi = n.min(30);
            point.insert(f.roles.sums[0].clone(), BigInt::from(rng.gen_range(0..=hi)));
            point.insert(f.roles.sums[1].clone(), BigInt::from(rng.gen_range(0..=hi)));
            match check_point(f, cert, &point) {
                Ok(true) => {
                    found = true;
                    break;
                }
                Ok(false) => return Ok(false),
                Err(_) => continue,
            }
        }
        if !found {
            return Err(Error::Inconclusive(
                "no admissible evaluation point found in 100 resamples".into(),
            ));
        }
    }
    Ok(true)
}

/// Check that the operator annihilates the actual double sum over its
/// natural support (both summation variables from 0 to the recurrence
/// value), for every recurrence value in the given inclusive range.
pub fn sum_annihilation_check(
    f: &HyperTerm,
    cert: &Certificate,
    n_range: (i64, i64),
    params: &BTreeMap<String, BigInt>,
) -> Result<bool> {
    validate(cert)?;
    let rec = &f.roles.rec;
    let mut cache: BTreeMap<i64, BigRational> = BTreeMap::new();
    let mut sum_at = |m: i64, params: &BTreeMap<String, BigInt>| -> Result<BigRational> {
        if let Some(v) = cache.get(&m) {
            return Ok(v.clone());
        }
        let mut pt = params.clone();
        pt.insert(rec.clone(), BigInt::from(m));
        let v = f.eval_sum([(0, m), (0, m)], &pt)?;
        cache.insert(m, v.clone());
        Ok(v)
    };
    for n in n_range.0..=n_range.1 {
        let mut ratpt = to_rat_map(params);
        ratpt.insert(rec.clone(), BigRational::from_integer(BigInt::from(n)));
        let mut acc = BigRational::zero();
        for (l, a) in cert.coeffs.iter().enumerate() {
            acc += a.eval(&ratpt)? * sum_at(n + l as i64, params)?;
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Right-hand side of an identity, evaluable by finite exact arithmetic.
#[derive(Clone, Debug)]
pub enum RhsSpec {
    /// A closed form: evaluated with both summation variables set to 0.
    Closed(HyperTerm),
    /// A single sum over the first summation variable from 0 to the
    /// recurrence value, with the second summation variable set to 0.
    SingleSum(HyperTerm),
}

impl RhsSpec {
    pub fn eval(&self, rec_value: i64, params: &BTreeMap<String, BigInt>) -> Result<BigRational> {
        match self {
            RhsSpec::Closed(t) => {
                let mut pt = params.clone();
                pt.insert(t.roles.rec.clone(), BigInt::from(rec_value));
                pt.insert(t.roles.sums[0].clone(), BigInt::zero());
                pt.insert(t.roles.sums[1].clone(), BigInt::zero());
                t.eval(&pt)
            }
            RhsSpec::SingleSum(t) => {
                let mut pt = params.clone();
                pt.insert(t.roles.rec.clone(), BigInt::from(rec_value));
                pt.insert(t.roles.sums[1].clone(), BigInt::zero());
                let mut total = BigRational::zero();
                for k in 0..=rec_value {
                    pt.insert(t.roles.sums[0].clone(), BigInt::from(k));
                    total += t.eval(&pt)?;
                }
                Ok(total)
            }
        }
    }
}

/// Exact equality of the double sum against an evaluable right-hand side for
/// every recurrence value in the range.
pub fn identity_numeric_check(
    f: &HyperTerm,
    rhs: &RhsSpec,
    n_range: (i64, i64),
    params: &BTreeMap<String, BigInt>,
) -> Result<bool> {
    for n in n_range.0..=n_range.1 {
        let mut pt = params.clone();
        pt.insert(f.roles.rec.clone(), BigInt::from(n));
        let lhs = f.eval_sum([(0, n), (0, n)], &pt)?;
        if lhs != rhs.eval(n, params)? {
            return Ok(false);
        }
    }
    Ok(true)
}
