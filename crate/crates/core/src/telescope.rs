//! Operator search: assemble the homogeneous coefficient system for a given
//! order and candidate denominators, solve it exactly over the field of
//! rational functions in the recurrence variable and parameters, and
//! normalize the first admissible solution into a certificate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigRational, One, Zero};

use crate::denest::{estden, reduction_candidates, W2Variant};
use crate::error::{Error, Result};
use crate::factored::Factored;
use crate::hyper::{HyperTerm, QuotientSet};
use crate::linalg::{is_nullvector, nullspace_modp, nullspace_poly_rows, poly_eval_mod};
use crate::poly::{poly_gcd, Monomial, Polynomial, Vars};
use crate::ratfun::RationalFunction;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_order: usize,
    /// Try reduced denominator candidates before the unreduced pair.
    pub reduce: bool,
    pub w2_variant: W2Variant,
    /// Highest numerator degree excess over deg(d*g) to try before moving
    /// on (the search starts at excess 1 and bumps while excess <= this).
    pub max_excess: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_order: 6,
            reduce: true,
            w2_variant: W2Variant::default(),
            max_excess: 3,
        }
    }
}

/// A telescoping certificate: operator coefficients plus the two rational
/// certificates in their f/(d*g) presentation.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub shift_var: String,
    pub order: usize,
    /// a_0..a_r over the recurrence variable and parameters.
    pub coeffs: Vec<Polynomial>,
    pub r1: RationalFunction,
    pub r2: RationalFunction,
    pub d: Polynomial,
    pub g1: Polynomial,
    pub g2: Polynomial,
    pub f1: Polynomial,
    pub f2: Polynomial,
    pub trace: Vec<String>,
}

/// Unknown layout of an assembled system. Columns are ordered f1
/// coefficients, then f2 coefficients, then a_0..a_r.
#[derive(Clone, Debug)]
pub struct SystemLayout {
    pub f1_monomials: Vec<(u32, u32)>,
    pub f2_monomials: Vec<(u32, u32)>,
    pub order: usize,
}

impl SystemLayout {
    pub fn a_offset(&self) -> usize {
        self.f1_monomials.len() + self.f2_monomials.len()
    }

    pub fn cols(&self) -> usize {
        self.a_offset() + self.order + 1
    }
}

fn monomials_up_to(deg: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for t in 0..=deg {
        for a in 0..=t {
            out.push((a, t - a));
        }
    }
    out
}

/// Build the homogeneous system whose nullspace contains the telescoping
/// solutions for the given order, candidate denominators and numerator
/// degrees. Rows live over the recurrence variable and parameters.
pub fn assemble_system(
    f: &HyperTerm,
    qs: &QuotientSet,
    g1: &Factored,
    g2: &Factored,
    deg1: u32,
    deg2: u32,
) -> Result<(Vec<Vec<Polynomial>>, SystemLayout)> {
    let vars = f.vars().clone();
    let [ii, jj] = f.sum_var_indices();
    let i = f.roles.sums[0].as_str();
    let j = f.roles.sums[1].as_str();

    let d = &qs.d;
    let den1 = qs.s1.mul(&d.shift(i, 1)).mul(&g1.shift(i, 1));
    let den0a = d.mul(g1);
    let den2 = qs.s2.mul(&d.shift(j, 1)).mul(&g2.shift(j, 1));
    let den0b = d.mul(g2);
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

    let layout = SystemLayout {
        f1_monomials: monomials_up_to(deg1),
        f2_monomials: monomials_up_to(deg2),
        order: qs.q.len(),
    };

    let iplus = Polynomial::linear(&vars, &[(i, 1)], 1)?;
    let jplus = Polynomial::linear(&vars, &[(j, 1)], 1)?;
    let mut apow = vec![a_poly];
    for _ in 1..=deg1 {
        apow.push(apow.last().unwrap().mul(&iplus));
    }
    let mut cpow = vec![c_poly];
    for _ in 1..=deg2 {
        cpow.push(cpow.last().unwrap().mul(&jplus));
    }

    let mut cols: Vec<Polynomial> = Vec::with_capacity(layout.cols());
    for &(a, b) in &layout.f1_monomials {
        let keep = b_poly.mul_var_pow(ii, a).mul_var_pow(jj, b);
        cols.push(keep.sub(&apow[a as usize].mul_var_pow(jj, b)));
    }
    for &(a, b) in &layout.f2_monomials {
        let keep = b2_poly.mul_var_pow(ii, a).mul_var_pow(jj, b);
        cols.push(keep.sub(&cpow[b as usize].mul_var_pow(ii, a)));
    }
    cols.push(big.expand());
    for qn in &qs.q_over_d {
        cols.push(qn.mul(&a_cof).expand());
    }

    // one row per monomial in the summation variables
    let pvars: Vars = Arc::new(vars[..vars.len() - 2].to_vec());
    let grouped: Vec<BTreeMap<Monomial, Polynomial>> = cols
        .iter()
        .map(|c| c.coeffs_wrt(&[ii, jj]))
        .collect();
    let mut keys: BTreeSet<Monomial> = BTreeSet::new();
    for g in &grouped {
        keys.extend(g.keys().cloned());
    }
    let mut rows = Vec::with_capacity(keys.len());
    for k in &keys {
        let mut row = Vec::with_capacity(cols.len());
        for g in &grouped {
            row.push(match g.get(k) {
                Some(p) => p.with_vars(&pvars)?,
                None => Polynomial::zero(&pvars),
            });
        }
        rows.push(row);
    }
    Ok((rows, layout))
}

/// Deterministic specialization points for the numeric prescreen, indexed
/// per variable position.
fn numeric_point(pvars: &Vars, which: usize) -> Vec<u64> {
    const BASE: [u64; 3] = [10007, 11261, 12979];
    (0..pvars.len())
        .map(|k| BASE[which] + 41 * k as u64)
        .collect()
}

fn eval_rows_mod(rows: &[Vec<Polynomial>], point: &[u64]) -> Result<Vec<Vec<u64>>> {
    rows.iter()
        .map(|r| r.iter().map(|p| poly_eval_mod(p, point)).collect())
        .collect()
}

fn has_a_part(basis: &[Vec<u64>], a_offset: usize) -> bool {
    basis.iter().any(|v| v[a_offset..].iter().any(|x| *x != 0))
}

/// Exact nullspace vectors with a nonzero operator part. A cheap numeric
/// specialization runs first: if the specialized system has no solution
/// with a nonzero operator part at several points, the symbolic solve is
/// skipped. When the specialization looks solvable, the symbolic
/// elimination runs on the numerically independent row subset and the
/// result is verified against the full system, falling back to a full
/// elimination on any mismatch.
fn solve_system(
    rows: &[Vec<Polynomial>],
    layout: &SystemLayout,
    pvars: &Vars,
) -> Result<Vec<Vec<Polynomial>>> {
    let cols = layout.cols();
    let a_offset = layout.a_offset();
    let mut pivot_rows: Option<Vec<usize>> = None;
    let mut promising = false;
    match (0..3)
        .map(|which| eval_rows_mod(rows, &numeric_point(pvars, which)))
        .collect::<Result<Vec<_>>>()
    {
        Ok(specialized) => {
            for num in specialized {
                let (basis, pivots) = nullspace_modp(num, cols);
                if has_a_part(&basis, a_offset) {
                    promising = true;
                    pivot_rows = Some(pivots);
                    break;
                }
            }
        }
        // a coefficient clashed with the screen prime: solve symbolically
        Err(_) => promising = true,
    }
    if std::env::var_os("TELSUM_DEBUG").is_some() {
        eprintln!(
            "debug prescreen promising={promising} subset={:?}",
            pivot_rows.as_ref().map(|p| p.len())
        );
    }
    if !promising {
        return Ok(Vec::new());
    }

    let basis = match &pivot_rows {
        Some(idx) if idx.len() < rows.len() => {
            let subset: Vec<Vec<Polynomial>> =
                idx.iter().map(|&r| rows[r].clone()).collect();
            let sub_basis = nullspace_poly_rows(subset, cols, pvars)?;
            if sub_basis.iter().all(|v| is_nullvector(rows, v)) {
                sub_basis
            } else {
                nullspace_poly_rows(rows.to_vec(), cols, pvars)?
            }
        }
        _ => nullspace_poly_rows(rows.to_vec(), cols, pvars)?,
    };
    Ok(basis
        .into_iter()
        .filter(|v| v[a_offset..].iter().any(|p| !p.is_zero()))
        .collect())
}

/// Turn a solution vector into a normalized certificate. The vector is
/// already cleared to coprime polynomial entries; this fixes the sign so the
/// highest nonzero operator coefficient has a positive leading coefficient
/// and assembles the f/(d*g) presentation.
pub fn normalize_certificate(
    f: &HyperTerm,
    vector: &[Polynomial],
    layout: &SystemLayout,
    qs: &QuotientSet,
    g1: &Factored,
    g2: &Factored,
) -> Result<Certificate> {
    let a_offset = layout.a_offset();
    let avec = &vector[a_offset..];
    let top = avec
        .iter()
        .rposition(|p| !p.is_zero())
        .ok_or_else(|| Error::Contract("solution vector has no operator part".into()))?;
    let negate = avec[top]
        .leading()
        .map(|(_, c)| c < &BigRational::zero())
        .unwrap_or(false);
    let vector: Vec<Polynomial> = if negate {
        vector.iter().map(|p| p.neg()).collect()
    } else {
        vector.to_vec()
    };

    let vars = f.vars().clone();
    let [ii, jj] = f.sum_var_indices();
    let build = |monos: &[(u32, u32)], entries: &[Polynomial]| -> Result<Polynomial> {
        let mut out = Polynomial::zero(&vars);
        for (&(a, b), c) in monos.iter().zip(entries) {
            if c.is_zero() {
                continue;
            }
            let c = c.with_vars(&vars)?;
            out = out.add(&c.mul_var_pow(ii, a).mul_var_pow(jj, b));
        }
        Ok(out)
    };
    let n1 = layout.f1_monomials.len();
    let n2 = layout.f2_monomials.len();
    let f1 = build(&layout.f1_monomials, &vector[..n1])?;
    let f2 = build(&layout.f2_monomials, &vector[n1..n1 + n2])?;
    let d = qs.d.expand();
    let g1p = g1.drop_unit().expand();
    let g2p = g2.drop_unit().expand();
    // The denominators factor into known low-degree blocks, so the
    // quotients are reduced by trial division instead of a generic gcd.
    let reduce_known = |num: &Polynomial, den: &Factored| -> Result<RationalFunction> {
        let mut num = num.clone();
        let mut kept = Factored::from_unit(den.vars(), den.unit().clone());
        for (p, e) in den.factors() {
            let mut e = *e;
            while e > 0 {
                match num.exact_div(p) {
                    Ok(q) => {
                        num = q;
                        e -= 1;
                    }
                    Err(_) => break,
                }
            }
            if e > 0 {
                kept.push(p, e);
            }
        }
        RationalFunction::from_coprime(num, kept.expand())
    };
    let r1 = reduce_known(&f1, &qs.d.mul(&g1.drop_unit()))?;
    let r2 = reduce_known(&f2, &qs.d.mul(&g2.drop_unit()))?;
    Ok(Certificate {
        shift_var: f.roles.rec.clone(),
        order: layout.order,
        coeffs: vector[a_offset..].to_vec(),
        r1,
        r2,
        d,
        g1: g1p,
        g2: g2p,
        f1,
        f2,
        trace: Vec::new(),
    })
}

fn cert_key_cmp(a: &Certificate, b: &Certificate) -> Ordering {
    let deg = |c: &Certificate| c.f1.total_degree() + c.f2.total_degree();
    deg(a)
        .cmp(&deg(b))
        .then_with(|| {
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                let o = x.canonical_cmp(y);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
        .then_with(|| a.f1.canonical_cmp(&b.f1))
        .then_with(|| a.f2.canonical_cmp(&b.f2))
}

/// Full search: increasing operator order, candidate denominators in list
/// order, numerator degree excesses 1 up to the configured ceiling.
pub fn bizeil(f: &HyperTerm, opts: &SolveOptions) -> Result<Certificate> {
    let est = estden(f, opts.w2_variant)?;
    let sum_idxs = f.sum_var_indices();
    let candidates = if opts.reduce {
        reduction_candidates(&est.g1, &est.g2, &sum_idxs)?
    } else {
        vec![(est.g1.clone(), est.g2.clone())]
    };
    bizeil_with(f, opts, candidates)
}

/// Search with an explicit candidate denominator list (used for comparing
/// denominator choices).
pub fn bizeil_with(
    f: &HyperTerm,
    opts: &SolveOptions,
    candidates: Vec<(Factored, Factored)>,
) -> Result<Certificate> {
    let [ii, jj] = f.sum_var_indices();
    let sum_idxs = [ii, jj];
    let vars = f.vars().clone();
    let pvars: Vars = Arc::new(vars[..vars.len() - 2].to_vec());
    let mut trace: Vec<String> = Vec::new();

    for r in 0..=opts.max_order {
        let tq = std::time::Instant::now();
        let qs = f.quotient_set(r)?;
        if std::env::var_os("TELSUM_DEBUG").is_some() {
            eprintln!("debug quotient_set r={r} {:?}", tq.elapsed());
        }
        let d_deg = qs.d.total_degree_in(&sum_idxs);
        for (g1c, g2c) in &candidates {
            let base1 = (d_deg + g1c.total_degree_in(&sum_idxs)) as u32;
            let base2 = (d_deg + g2c.total_degree_in(&sum_idxs)) as u32;
            for excess in 1..=opts.max_excess {
                let deg1 = base1 + excess;
                let deg2 = base2 + excess;
                let t0 = std::time::Instant::now();
                let (rows, layout) =
                    assemble_system(f, &qs, g1c, g2c, deg1, deg2)?;
                let t_asm = t0.elapsed();
                let sols = solve_system(&rows, &layout, &pvars)?;
                if std::env::var_os("TELSUM_DEBUG").is_some() {
                    eprintln!(
                        "debug r={r} deg=({deg1},{deg2}) rows={} cols={} asm={:?} solve={:?} sols={}",
                        rows.len(),
                        layout.cols(),
                        t_asm,
                        t0.elapsed() - t_asm,
                        sols.len()
                    );
                }
                if sols.is_empty() {
                    trace.push(format!(
                        "r={r} g1={g1c} g2={g2c} deg=({deg1},{deg2}): no operator"
                    ));
                    continue;
                }
                let tn = std::time::Instant::now();
                let mut certs: Vec<Certificate> = sols
                    .iter()
                    .map(|v| normalize_certificate(f, v, &layout, &qs, g1c, g2c))
                    .collect::<Result<_>>()?;
                certs.sort_by(cert_key_cmp);
                if std::env::var_os("TELSUM_DEBUG").is_some() {
                    eprintln!("debug normalize {:?}", tn.elapsed());
                }
                let mut cert = certs.remove(0);
                trace.push(format!(
                    "r={r} g1={g1c} g2={g2c} deg=({deg1},{deg2}): solved"
                ));
                cert.trace = trace;
                return Ok(cert);
            }
        }
    }
    Err(Error::NoCertificate {
        trace: trace.join("\n"),
    })
}

/// Compare operator coefficient lists up to a positive rational constant:
/// both sides are divided by their joint content and sign-normalized before
/// comparison.
pub fn operator_eq_up_to_constant(a: &[Polynomial], b: &[Polynomial]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let canon = |v: &[Polynomial]| -> Result<Vec<Polynomial>> {
        let mut g: Option<Polynomial> = None;
        for p in v {
            if p.is_zero() {
                continue;
            }
            g = Some(match g {
                None => p.unit_normalize(),
                Some(g) => poly_gcd(&g, p)?,
            });
        }
        let g = g.ok_or_else(|| Error::Domain("zero operator".into()))?;
        let mut out: Vec<Polynomial> = v
            .iter()
            .map(|p| {
                if p.is_zero() {
                    Ok(p.clone())
                } else {
                    p.exact_div(&g)
                }
            })
            .collect::<Result<_>>()?;
        let flip = out
            .iter()
            .rev()
            .find(|p| !p.is_zero())
            .and_then(|p| p.leading().map(|(_, c)| c < &BigRational::zero()))
            .unwrap_or(false);
        if flip {
            out = out.iter().map(|p| p.neg()).collect();
        }
        // strip any remaining rational content jointly
        let content = out
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.rational_content())
            .reduce(|x, y| {
                use num::Integer;
                let num = x.numer().gcd(y.numer());
                let den = x.denom().lcm(y.denom());
                BigRational::new(num, den)
            })
            .unwrap_or_else(BigRational::one);
        Ok(out.iter().map(|p| p.scale(&content.recip())).collect())
    };
    Ok(canon(a)? == canon(b)?)
}
