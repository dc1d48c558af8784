//! Denominator estimation for the bivariate telescoping ansatz.
//!
//! From the two unit-shift quotients of a term the estimator extracts
//! factors that are guaranteed, or at least strongly expected, to show up in
//! the denominators of the certificate pair. The reduction step then
//! enumerates smaller candidate denominators that often suffice in practice.

use std::fmt;

use crate::error::Result;
use crate::factored::Factored;
use crate::hyper::HyperTerm;
use crate::poly::{factor_depending_on, max_factor_free_of, Polynomial};

/// Which product the w2 gcd starts from. The two published descriptions of
/// the estimator disagree on this input; both are implemented and the
/// algorithm reading is the default.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum W2Variant {
    #[default]
    Algorithm,
    Theorem,
}

/// Estimated denominator data: g1 = v * u1 * u2 and g2 = v * w1 * w2.
#[derive(Clone, Debug)]
pub struct DenominatorEstimate {
    pub v: Factored,
    pub u1: Factored,
    pub u2: Factored,
    pub w1: Factored,
    pub w2: Factored,
    pub g1: Factored,
    pub g2: Factored,
}

/// Theoretical divisibility bounds with the unbounded pieces set to the
/// estimator's step-3 values.
#[derive(Clone, Debug)]
pub struct BoundSet {
    pub v1: Factored,
    pub v2: Factored,
    pub v4: Factored,
    pub u2: Factored,
    pub w2: Factored,
    pub g1: Factored,
    pub g2: Factored,
}

/// Per-block maximal factor that is free of `other` and involves `must`.
/// The recurrence variable and parameters are always allowed.
fn only_dep(f: &Factored, must: &str, other: &str) -> Result<Factored> {
    let deps: Vec<&str> = f
        .vars()
        .iter()
        .map(String::as_str)
        .filter(|v| *v != other)
        .collect();
    let mut out = Factored::one(f.vars());
    for (p, e) in f.factors() {
        let q = max_factor_free_of(p, &deps)?;
        if q.is_constant() {
            continue;
        }
        let q = factor_depending_on(&q, must)?;
        if !q.is_constant() {
            out.push(&q, *e);
        }
    }
    Ok(out.drop_unit())
}

/// Per-block maximal factor with no part free of `var`.
fn dep_part(f: &Factored, var: &str) -> Result<Factored> {
    let mut out = Factored::one(f.vars());
    for (p, e) in f.factors() {
        let q = factor_depending_on(p, var)?;
        if !q.is_constant() {
            out.push(&q, *e);
        }
    }
    Ok(out.drop_unit())
}

struct ShiftData {
    s2: Factored,
    s1p: Factored,
    /// r1 * s2'
    rs1: Factored,
    /// r2 * s1'
    rs2: Factored,
    /// r1(i-1, j) * s2'(i-1, j)
    rs1_back: Factored,
    /// r2(i, j-1) * s1'(i, j-1)
    rs2_back: Factored,
    /// s1 * s2'
    ss: Factored,
}

fn shift_data(f: &HyperTerm) -> Result<ShiftData> {
    let i = f.roles.sums[0].as_str();
    let j = f.roles.sums[1].as_str();
    let (r1, s1) = f.shift_quotient_factored(i, 1)?;
    let (r2, s2) = f.shift_quotient_factored(j, 1)?;
    let u = s1.gcd(&s2)?;
    let s1p = s1.div_exact(&u)?;
    let s2p = s2.div_exact(&u)?;
    let rs1 = r1.mul(&s2p);
    let rs2 = r2.mul(&s1p);
    Ok(ShiftData {
        rs1_back: rs1.shift(i, -1),
        rs2_back: rs2.shift(j, -1),
        ss: s1.mul(&s2p),
        s2,
        s1p,
        rs1,
        rs2,
    })
}

pub fn estden(f: &HyperTerm, variant: W2Variant) -> Result<DenominatorEstimate> {
    let i = f.roles.sums[0].as_str();
    let j = f.roles.sums[1].as_str();
    let sd = shift_data(f)?;

    let v1 = only_dep(&sd.rs1, i, j)?;
    let v2 = only_dep(&sd.rs2, j, i)?;
    let v = v1
        .shift(i, -1)
        .gcd(&v2.rename_var(j, i)?.shift(i, -1))?;

    let u1 = only_dep(&sd.ss, j, i)?;
    let w1 = only_dep(&sd.ss, i, j)?;

    let u2 = dep_part(&sd.ss.gcd(&sd.rs1_back)?, i)?;
    let w2_from = match variant {
        W2Variant::Algorithm => sd.ss.clone(),
        W2Variant::Theorem => sd.s2.mul(&sd.s1p),
    };
    let w2 = dep_part(&w2_from.gcd(&sd.rs2_back)?, j)?;

    let g1 = v.mul(&u1).mul(&u2).drop_unit();
    let g2 = v.mul(&w1).mul(&w2).drop_unit();
    Ok(DenominatorEstimate {
        v: v.drop_unit(),
        u1,
        u2,
        w1,
        w2,
        g1,
        g2,
    })
}

pub fn theorem_bound(f: &HyperTerm) -> Result<BoundSet> {
    let i = f.roles.sums[0].as_str();
    let j = f.roles.sums[1].as_str();
    let sd = shift_data(f)?;

    let v1 = only_dep(&sd.rs1_back, i, j)?;
    let v2 = only_dep(&sd.rs2_back, j, i)?;
    let v4 = dep_part(
        &dep_part(&sd.rs1_back.gcd(&sd.rs2_back)?, i)?,
        j,
    )?;
    let u1 = only_dep(&sd.ss, j, i)?;
    let w1 = only_dep(&sd.ss, i, j)?;
    let u2 = dep_part(&sd.ss.gcd(&sd.rs1_back)?, i)?;
    let w2 = dep_part(&sd.s2.mul(&sd.s1p).gcd(&sd.rs2_back)?, j)?;

    let common = v1.mul(&v2).mul(&v4);
    let g1 = common.mul(&u1).mul(&u2).drop_unit();
    let g2 = common.mul(&w1).mul(&w2).drop_unit();
    Ok(BoundSet {
        v1,
        v2,
        v4,
        u2,
        w2,
        g1,
        g2,
    })
}

/// Removal options of summation-variable total degree 1: one multiplicity of
/// a linear block. Blocks the estimate is least committed to come first:
/// multiplicity-1 blocks before repeated ones, canonical order within a tier.
fn deg1_options(g: &Factored, sum_idxs: &[usize]) -> Vec<Factored> {
    let mut opts: Vec<(u32, Factored)> = Vec::new();
    for (p, e) in g.factors() {
        if p.total_degree_in(sum_idxs) == 1 && p.total_degree() == 1 {
            let mut f = Factored::one(g.vars());
            f.push(p, 1);
            opts.push((*e, f));
        }
    }
    opts.sort_by(|(ea, a), (eb, b)| {
        ea.cmp(eb)
            .then_with(|| a.expand().canonical_cmp(&b.expand()))
    });
    opts.into_iter().map(|(_, f)| f).collect()
}

/// Removal options of summation-variable total degree 2: a degree-2 block,
/// the square of a linear block with multiplicity at least 2, or a product
/// of two distinct linear blocks.
fn deg2_options(g: &Factored, sum_idxs: &[usize]) -> Vec<Factored> {
    let mut opts: Vec<Factored> = Vec::new();
    let linear: Vec<&Polynomial> = g
        .factors()
        .iter()
        .filter(|(p, _)| p.total_degree_in(sum_idxs) == 1 && p.total_degree() == 1)
        .map(|(p, _)| p)
        .collect();
    for (p, e) in g.factors() {
        if p.total_degree_in(sum_idxs) == 2 && p.total_degree() == 2 {
            let mut f = Factored::one(g.vars());
            f.push(p, 1);
            opts.push(f);
        }
        if p.total_degree_in(sum_idxs) == 1 && p.total_degree() == 1 && *e >= 2 {
            let mut f = Factored::one(g.vars());
            f.push(p, 2);
            opts.push(f);
        }
    }
    for (a, p) in linear.iter().enumerate() {
        for q in linear.iter().skip(a + 1) {
            let mut f = Factored::one(g.vars());
            f.push(p, 1);
            f.push(q, 1);
            opts.push(f);
        }
    }
    opts.sort_by(|a, b| a.expand().canonical_cmp(&b.expand()));
    opts.dedup_by(|a, b| a.expand() == b.expand());
    opts
}

/// Image of a linear one-sum-variable block under swapping the two
/// summation variables, or None if the block involves neither.
fn swapped_block(opt: &Factored, si: &str, sj: &str, sum_idxs: &[usize]) -> Option<Polynomial> {
    let (p, _) = opt.factors().first()?;
    if p.total_degree_in(&sum_idxs[..1]) > 0 {
        opt.rename_var(si, sj).ok()
    } else if p.total_degree_in(&sum_idxs[1..]) > 0 {
        opt.rename_var(sj, si).ok()
    } else {
        None
    }
    .map(|f| f.factors().first().map(|(q, _)| q.clone()))
    .flatten()
}

/// Stable-sort degree-2 options so that those sharing a block with `pref`
/// come first: when a linear factor is dropped on one side, the coherent
/// move on the other side is to drop its mirror image as well.
fn prefer_containing(opts: &[Factored], pref: &Option<Polynomial>) -> Vec<Factored> {
    let mut v: Vec<Factored> = opts.to_vec();
    if let Some(q) = pref {
        v.sort_by_key(|f| if f.multiplicity_of(q) > 0 { 0 } else { 1 });
    }
    v
}

/// Ordered candidate denominator pairs: degree-1 cancellation from g1 paired
/// with degree-2 cancellation from g2, then the mirrored pattern, then
/// one-sided cancellations, ending with the unreduced pair. Within a pairing
/// the degree-2 side preferentially drops the swapped image of the linear
/// factor dropped on the degree-1 side.
pub fn reduction_candidates(
    g1: &Factored,
    g2: &Factored,
    sum_idxs: &[usize],
) -> Result<Vec<(Factored, Factored)>> {
    let si = g1.vars()[sum_idxs[0]].clone();
    let sj = g1.vars()[sum_idxs[1]].clone();
    let d1_g1 = deg1_options(g1, sum_idxs);
    let d2_g1 = deg2_options(g1, sum_idxs);
    let d1_g2 = deg1_options(g2, sum_idxs);
    let d2_g2 = deg2_options(g2, sum_idxs);

    let mut out: Vec<(Factored, Factored)> = Vec::new();
    let push = |c1: Factored, c2: Factored, out: &mut Vec<(Factored, Factored)>| {
        let e1 = c1.expand();
        let e2 = c2.expand();
        if !out
            .iter()
            .any(|(a, b)| a.expand() == e1 && b.expand() == e2)
        {
            out.push((c1, c2));
        }
    };
    for a in &d1_g1 {
        let pref = swapped_block(a, &si, &sj, sum_idxs);
        for b in prefer_containing(&d2_g2, &pref) {
            push(g1.div_exact(a)?, g2.div_exact(&b)?, &mut out);
        }
    }
    for b in &d1_g2 {
        let pref = swapped_block(b, &si, &sj, sum_idxs);
        for a in prefer_containing(&d2_g1, &pref) {
            push(g1.div_exact(&a)?, g2.div_exact(b)?, &mut out);
        }
    }
    for a in &d1_g1 {
        push(g1.div_exact(a)?, g2.clone(), &mut out);
    }
    for b in &d2_g2 {
        push(g1.clone(), g2.div_exact(b)?, &mut out);
    }
    push(g1.clone(), g2.clone(), &mut out);
    Ok(out)
}

impl fmt::Display for DenominatorEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "v  = {}", self.v)?;
        writeln!(f, "u1 = {}", self.u1)?;
        writeln!(f, "u2 = {}", self.u2)?;
        writeln!(f, "w1 = {}", self.w1)?;
        writeln!(f, "w2 = {}", self.w2)?;
        writeln!(f, "g1 = {}", self.g1)?;
        write!(f, "g2 = {}", self.g2)
    }
}

impl fmt::Display for BoundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "v1 = {}", self.v1)?;
        writeln!(f, "v2 = {}", self.v2)?;
        writeln!(f, "v4 = {}", self.v4)?;
        writeln!(f, "u2 = {}", self.u2)?;
        writeln!(f, "w2 = {}", self.w2)?;
        writeln!(f, "G1 = {}", self.g1)?;
        write!(f, "G2 = {}", self.g2)
    }
}
