//! Exact nullspace computation over the field of rational functions.
//!
//! Rows are kept as polynomial vectors; fraction-free cross-multiplication
//! with content stripping controls coefficient growth, and back substitution
//! over the fraction field recovers the canonical (RREF-derived) nullspace
//! basis. The basis is therefore independent of pivot-row choices.

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::poly::{poly_gcd, poly_lcm, Monomial, Polynomial, Vars};
use crate::ratfun::RationalFunction;

/// Rectangular matrix of rational functions over the parameter field.
#[derive(Clone, Debug)]
pub struct RFMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<RationalFunction>>,
    pub vars: Vars,
}

impl RFMatrix {
    pub fn new(vars: &Vars, entries: Vec<Vec<RationalFunction>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map(|r| r.len()).unwrap_or(0);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged matrix".into()));
        }
        Ok(RFMatrix {
            rows,
            cols,
            entries,
            vars: vars.clone(),
        })
    }

    pub fn from_polys(vars: &Vars, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let entries = rows
            .into_iter()
            .map(|r| r.into_iter().map(RationalFunction::from_poly).collect())
            .collect();
        RFMatrix::new(vars, entries)
    }

    /// Clear each row to polynomial entries (row scaling preserves the
    /// nullspace).
    pub fn poly_rows(&self) -> Result<Vec<Vec<Polynomial>>> {
        let mut out = Vec::with_capacity(self.rows);
        for row in &self.entries {
            let mut lcm = Polynomial::one(&self.vars);
            for e in row {
                if !e.den().is_one() {
                    lcm = poly_lcm(&lcm, e.den())?;
                }
            }
            let mut prow = Vec::with_capacity(self.cols);
            for e in row {
                let p = e.num().mul(&lcm.exact_div(e.den())?);
                prow.push(p);
            }
            out.push(prow);
        }
        Ok(out)
    }
}

/// Basis of the right nullspace, one vector per free column, cleared to
/// polynomial entries with content 1 and positive-leading first nonzero
/// entry. This is the canonical basis derived from the reduced row echelon
/// form, so it is deterministic and independent of pivot-row choices.
pub fn nullspace(m: &RFMatrix) -> Result<Vec<Vec<Polynomial>>> {
    let rows = m.poly_rows()?;
    nullspace_poly_rows(rows, m.cols, &m.vars)
}

pub fn nullspace_poly_rows(
    rows: Vec<Vec<Polynomial>>,
    cols: usize,
    vars: &Vars,
) -> Result<Vec<Vec<Polynomial>>> {
    let t0 = std::time::Instant::now();
    if let Some(basis) = nullspace_interp(&rows, cols, vars)? {
        if std::env::var_os("TELSUM_DEBUG").is_some() {
            eprintln!("debug interp {:?}", t0.elapsed());
        }
        return Ok(basis);
    }
    let ech = bareiss_echelon(rows, cols)?;
    if std::env::var_os("TELSUM_DEBUG").is_some() {
        eprintln!("debug bareiss {:?}", t0.elapsed());
    }
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut x: Vec<RationalFunction> =
            (0..cols).map(|_| RationalFunction::zero(vars)).collect();
        x[fc] = RationalFunction::one(vars);
        for &(pr, pc) in ech.pivots.iter().rev() {
            let row = &ech.rows[pr];
            let mut acc = RationalFunction::zero(vars);
            for (c, e) in row.iter().enumerate() {
                if c == pc || e.is_zero() || x[c].is_zero() {
                    continue;
                }
                acc = acc.add(&x[c].mul_poly(e)?)?;
            }
            if !acc.is_zero() {
                x[pc] = acc.neg().div(&RationalFunction::from_poly(row[pc].clone()))?;
            }
        }
        basis.push(clear_vector(&x, vars)?);
    }
    Ok(basis)
}

/// Row echelon data: surviving rows plus (row, col) pivot list in column
/// order.
struct Echelon {
    rows: Vec<Vec<Polynomial>>,
    pivots: Vec<(usize, usize)>,
}

/// Sparse integer-coefficient polynomial used inside the fraction-free
/// elimination, where per-operation rational normalization would dominate.
type IPoly = std::collections::BTreeMap<Monomial, num::BigInt>;

fn ip_is_zero(p: &IPoly) -> bool {
    p.is_empty()
}

fn ip_add_term(p: &mut IPoly, m: Monomial, c: num::BigInt) {
    use num::Zero;
    if c.is_zero() {
        return;
    }
    match p.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if num::Zero::is_zero(e.get()) {
                e.remove();
            }
        }
    }
}

fn ip_mul(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out = IPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = Monomial(
                ma.0.iter()
                    .zip(&mb.0)
                    .map(|(x, y)| x + y)
                    .collect(),
            );
            ip_add_term(&mut out, m, ca * cb);
        }
    }
    out
}

fn ip_sub_assign(a: &mut IPoly, b: IPoly) {
    for (m, c) in b {
        ip_add_term(a, m, -c);
    }
}

/// Exact division; the divisor is known to divide (Bareiss invariant).
fn ip_exact_div(mut r: IPoly, d: &IPoly) -> Result<IPoly> {
    let (dm, dc) = d
        .iter()
        .next_back()
        .ok_or_else(|| Error::Domain("division by zero polynomial".into()))?;
    let mut q = IPoly::new();
    while let Some((rm, rc)) = r.iter().next_back() {
        let exps: Option<Vec<u32>> = rm
            .0
            .iter()
            .zip(&dm.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect();
        let Some(exps) = exps else {
            return Err(Error::NonExactDivision("fraction-free elimination".into()));
        };
        let (quot, rem) = num::Integer::div_rem(rc, dc);
        if !num::Zero::is_zero(&rem) {
            return Err(Error::NonExactDivision("fraction-free elimination".into()));
        }
        let qm = Monomial(exps);
        let mut piece = IPoly::new();
        piece.insert(qm.clone(), quot.clone());
        ip_sub_assign(&mut r, ip_mul(&piece, d));
        q.insert(qm, quot);
    }
    Ok(q)
}

/// Clear a row to integer coefficients (row scaling preserves the
/// nullspace).
fn row_to_ipolys(row: &[Polynomial]) -> Vec<IPoly> {
    use num::{BigInt, Integer, One};
    let mut lcm = BigInt::one();
    for p in row {
        for (_, c) in p.terms() {
            lcm = lcm.lcm(c.denom());
        }
    }
    row.iter()
        .map(|p| {
            let mut out = IPoly::new();
            for (m, c) in p.terms() {
                let v = c * num::BigRational::from_integer(lcm.clone());
                out.insert(m.clone(), v.to_integer());
            }
            out
        })
        .collect()
}

fn ip_to_poly(p: &IPoly, vars: &Vars) -> Polynomial {
    Polynomial::from_terms(
        vars,
        p.iter()
            .map(|(m, c)| (m.clone(), num::BigRational::from_integer(c.clone())))
            .collect(),
    )
}

/// Fraction-free elimination (Bareiss single-step division): every update is
/// (pivot * entry - pivot_row_entry * factor) / previous_pivot with the
/// division exact, so entries stay minors of the input and no gcds are
/// needed to control growth. Every unused row is updated at every step to
/// keep the divisibility invariant.
fn bareiss_echelon(rows: Vec<Vec<Polynomial>>, cols: usize) -> Result<Echelon> {
    let vars = rows
        .first()
        .and_then(|r| r.first())
        .map(|p| p.vars().clone());
    let mut irows: Vec<Vec<IPoly>> = rows.iter().map(|r| row_to_ipolys(r)).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; irows.len()];
    let mut prev: Option<IPoly> = None;
    for col in 0..cols {
        let Some(pr) = (0..irows.len())
            .find(|&ri| !used[ri] && !ip_is_zero(&irows[ri][col]))
        else {
            continue;
        };
        used[pr] = true;
        pivots.push((pr, col));
        let pivot_row = irows[pr].clone();
        let pivot = pivot_row[col].clone();
        for (ri, row) in irows.iter_mut().enumerate() {
            if used[ri] {
                continue;
            }
            let factor = row[col].clone();
            for (c, e) in row.iter_mut().enumerate() {
                let mut t = ip_mul(e, &pivot);
                if !ip_is_zero(&factor) && !ip_is_zero(&pivot_row[c]) {
                    ip_sub_assign(&mut t, ip_mul(&pivot_row[c], &factor));
                }
                if let Some(prev) = &prev {
                    if !ip_is_zero(&t) {
                        t = ip_exact_div(t, prev)?;
                    }
                }
                *e = t;
            }
        }
        prev = Some(pivot);
    }
    let vars = match vars {
        Some(v) => v,
        None => return Ok(Echelon { rows, pivots }),
    };
    let rows = irows
        .iter()
        .map(|r| r.iter().map(|e| ip_to_poly(e, &vars)).collect())
        .collect();
    Ok(Echelon { rows, pivots })
}

/// Scale a rational-function vector to coprime polynomial entries with
/// content 1 and a positive-leading first nonzero entry.
pub fn clear_vector(x: &[RationalFunction], vars: &Vars) -> Result<Vec<Polynomial>> {
    let mut lcm = Polynomial::one(vars);
    for e in x {
        if !e.is_zero() && !e.den().is_one() {
            lcm = poly_lcm(&lcm, e.den())?;
        }
    }
    let mut v: Vec<Polynomial> = Vec::with_capacity(x.len());
    for e in x {
        if e.is_zero() {
            v.push(Polynomial::zero(vars));
        } else {
            v.push(e.num().mul(&lcm.exact_div(e.den())?));
        }
    }
    let mut content: Option<Polynomial> = None;
    for e in &v {
        if e.is_zero() {
            continue;
        }
        content = Some(match content {
            None => e.unit_normalize(),
            Some(g) => poly_gcd(&g, e)?,
        });
        if content.as_ref().unwrap().is_one() {
            break;
        }
    }
    if let Some(g) = content {
        if !g.is_one() {
            for e in v.iter_mut() {
                if !e.is_zero() {
                    *e = e.exact_div(&g)?;
                }
            }
        }
    }
    if let Some(first) = v.iter().find(|e| !e.is_zero()) {
        let u = first.normalization_unit();
        if !u.is_one() {
            let inv = u.recip();
            for e in v.iter_mut() {
                *e = e.scale(&inv);
            }
        }
    }
    Ok(v)
}

/// Gaussian elimination over plain rationals. Returns the nullspace basis
/// and the set of pivot row indices (useful for selecting an independent row
/// subset of a specialized system).
pub fn nullspace_q(
    mut rows: Vec<Vec<BigRational>>,
    cols: usize,
) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let nrows = rows.len();
    let mut used = vec![false; nrows];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        let mut pr = None;
        for ri in 0..nrows {
            if !used[ri] && !rows[ri][col].is_zero() {
                pr = Some(ri);
                break;
            }
        }
        let Some(pr) = pr else { continue };
        used[pr] = true;
        pivots.push((pr, col));
        let inv = rows[pr][col].clone().recip();
        for e in rows[pr].iter_mut() {
            *e = &*e * &inv;
        }
        let prow = rows[pr].clone();
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri == pr || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, e) in row.iter_mut().enumerate() {
                *e = &*e - &(&prow[c] * &f);
            }
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut x = vec![BigRational::zero(); cols];
        x[fc] = BigRational::one();
        for &(pr, pc) in &pivots {
            let v = -rows[pr][fc].clone();
            if !v.is_zero() {
                x[pc] = v;
            }
        }
        basis.push(x);
    }
    let pivot_rows = pivots.iter().map(|&(r, _)| r).collect();
    (basis, pivot_rows)
}

/// Modulus for the fast numeric prescreen (a Mersenne prime).
pub const SCREEN_PRIME: u64 = (1 << 61) - 1;

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut out = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            out = mulmod(out, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    out
}

pub(crate) fn bigint_mod(x: &num::BigInt, p: u64) -> u64 {
    use num::ToPrimitive;
    let r = x % num::BigInt::from(p);
    let r = if r < num::BigInt::from(0) {
        r + num::BigInt::from(p)
    } else {
        r
    };
    r.to_u64().unwrap()
}

/// Evaluate a polynomial modulo `SCREEN_PRIME` at a point given per variable
/// index. Errors if a coefficient denominator vanishes modulo the prime.
pub fn poly_eval_mod(poly: &Polynomial, assign: &[u64]) -> Result<u64> {
    let p = SCREEN_PRIME;
    let mut total = 0u64;
    for (m, c) in poly.terms() {
        let num = bigint_mod(c.numer(), p);
        let den = bigint_mod(c.denom(), p);
        if den == 0 {
            return Err(Error::Domain(
                "coefficient denominator vanishes modulo screen prime".into(),
            ));
        }
        let mut v = mulmod(num, powmod(den, p - 2, p), p);
        for (k, &e) in m.0.iter().enumerate() {
            if e > 0 {
                v = mulmod(v, powmod(assign[k], e as u64, p), p);
            }
        }
        total = (total + v) % p;
    }
    Ok(total)
}

/// Gauss-Jordan elimination modulo `SCREEN_PRIME`. Returns the nullspace
/// basis and the pivot row indices (a maximal independent row subset).
pub fn nullspace_modp(mut rows: Vec<Vec<u64>>, cols: usize) -> (Vec<Vec<u64>>, Vec<usize>) {
    let p = SCREEN_PRIME;
    let nrows = rows.len();
    let mut used = vec![false; nrows];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        let Some(pr) = (0..nrows).find(|&ri| !used[ri] && rows[ri][col] != 0) else {
            continue;
        };
        used[pr] = true;
        pivots.push((pr, col));
        let inv = powmod(rows[pr][col], p - 2, p);
        for e in rows[pr].iter_mut() {
            *e = mulmod(*e, inv, p);
        }
        let prow = rows[pr].clone();
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri == pr || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (c, e) in row.iter_mut().enumerate() {
                *e = (*e + p - mulmod(prow[c], f, p)) % p;
            }
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut x = vec![0u64; cols];
        x[fc] = 1;
        for &(pr, pc) in &pivots {
            let v = rows[pr][fc];
            if v != 0 {
                x[pc] = p - v;
            }
        }
        basis.push(x);
    }
    let pivot_rows = pivots.iter().map(|&(r, _)| r).collect();
    (basis, pivot_rows)
}

/// Primes just below 2^61 for Chinese-remainder reconstruction.
pub(crate) const CRT_PRIMES: [u64; 64] = [
    2305843009213693951,
    2305843009213693921,
    2305843009213693907,
    2305843009213693723,
    2305843009213693693,
    2305843009213693669,
    2305843009213693613,
    2305843009213693561,
    2305843009213693549,
    2305843009213693487,
    2305843009213693421,
    2305843009213693373,
    2305843009213693277,
    2305843009213693193,
    2305843009213693153,
    2305843009213693133,
    2305843009213693123,
    2305843009213693109,
    2305843009213693093,
    2305843009213693013,
    2305843009213692967,
    2305843009213692937,
    2305843009213692799,
    2305843009213692757,
    2305843009213692737,
    2305843009213692671,
    2305843009213692653,
    2305843009213692601,
    2305843009213692581,
    2305843009213692527,
    2305843009213692463,
    2305843009213692427,
    2305843009213692419,
    2305843009213692409,
    2305843009213692343,
    2305843009213692331,
    2305843009213692283,
    2305843009213692211,
    2305843009213692199,
    2305843009213692139,
    2305843009213692107,
    2305843009213692103,
    2305843009213692097,
    2305843009213692089,
    2305843009213692083,
    2305843009213692043,
    2305843009213692031,
    2305843009213692029,
    2305843009213692007,
    2305843009213691993,
    2305843009213691929,
    2305843009213691869,
    2305843009213691837,
    2305843009213691819,
    2305843009213691767,
    2305843009213691581,
    2305843009213691579,
    2305843009213691569,
    2305843009213691567,
    2305843009213691551,
    2305843009213691413,
    2305843009213691401,
    2305843009213691357,
    2305843009213691347,
];

/// Reduced row echelon form modulo `p` with Gauss-Jordan elimination.
/// Returns the transformed rows, the (row, col) pivot list in column order
/// and the determinant of the pivot submatrix (rows in pivot order, columns
/// ascending), which is the product of the successive pivot values.
fn rref_modp(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<(usize, usize)>, u64) {
    let nrows = rows.len();
    let mut used = vec![false; nrows];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut det = 1u64;
    for col in 0..cols {
        let Some(pr) = (0..nrows).find(|&ri| !used[ri] && rows[ri][col] != 0) else {
            continue;
        };
        used[pr] = true;
        pivots.push((pr, col));
        det = mulmod(det, rows[pr][col], p);
        let inv = powmod(rows[pr][col], p - 2, p);
        for e in rows[pr].iter_mut() {
            *e = mulmod(*e, inv, p);
        }
        let prow = rows[pr].clone();
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri == pr || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (c, e) in row.iter_mut().enumerate() {
                *e = (*e + p - mulmod(prow[c], f, p)) % p;
            }
        }
    }
    (rows, pivots, det)
}

/// Coefficients of the unique polynomial through (xs[k], ys[k]) modulo `p`,
/// built by Newton divided differences.
pub(crate) fn newton_interp_modp(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    // Divided-difference table, computed in place.
    let mut dd = ys.to_vec();
    for lvl in 1..n {
        for k in (lvl..n).rev() {
            let num = (dd[k] + p - dd[k - 1]) % p;
            let den = (xs[k] + p - xs[k - lvl]) % p;
            dd[k] = mulmod(num, powmod(den, p - 2, p), p);
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs = vec![0u64; n];
    let mut base = vec![0u64; n];
    base[0] = 1;
    let mut base_len = 1usize;
    for (k, &c) in dd.iter().enumerate() {
        for (i, b) in base.iter().enumerate().take(base_len) {
            coeffs[i] = (coeffs[i] + mulmod(c, *b, p)) % p;
        }
        if k + 1 < n {
            // base *= (x - xs[k])
            let neg = p - xs[k] % p;
            let mut next = vec![0u64; base_len + 1];
            for (i, b) in base.iter().enumerate().take(base_len) {
                next[i] = (next[i] + mulmod(*b, neg, p)) % p;
                next[i + 1] = (next[i + 1] + *b) % p;
            }
            base[..base_len + 1].copy_from_slice(&next);
            base_len += 1;
        }
    }
    coeffs
}

/// Horner evaluation of a dense coefficient vector modulo `p`.
pub(crate) fn eval_dense_modp(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (mulmod(acc, x, p) + c) % p;
    }
    acc
}

// Dense univariate polynomials modulo p: little-endian coefficient vectors
// without trailing zeros.

pub(crate) fn pp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pp_deg(v: &[u64]) -> isize {
    v.len() as isize - 1
}

pub(crate) fn pp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(ca, cb, p)) % p;
        }
    }
    pp_trim(&mut out);
    out
}

fn pp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let ca = a.get(i).copied().unwrap_or(0);
        let cb = b.get(i).copied().unwrap_or(0);
        *o = (ca + p - cb) % p;
    }
    pp_trim(&mut out);
    out
}

pub(crate) fn pp_scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| mulmod(x, c, p)).collect();
    pp_trim(&mut out);
    out
}

pub(crate) fn pp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by zero polynomial image");
    let mut r = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; a.len() - b.len() + 1];
    let lcinv = powmod(*b.last().unwrap(), p - 2, p);
    while r.len() >= b.len() && !r.is_empty() {
        let c = mulmod(*r.last().unwrap(), lcinv, p);
        let sh = r.len() - b.len();
        q[sh] = c;
        for (i, &cb) in b.iter().enumerate() {
            r[sh + i] = (r[sh + i] + p - mulmod(c, cb, p)) % p;
        }
        pp_trim(&mut r);
    }
    pp_trim(&mut q);
    (q, r)
}

pub(crate) fn pp_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => pp_scale(a, powmod(lc, p - 2, p), p),
    }
}

pub(crate) fn pp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    while !r1.is_empty() {
        let (_, r) = pp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
    }
    pp_monic(&r0, p)
}

/// Reduced fraction num/den through the sample points, found by the
/// extended Euclidean algorithm on the point-set modulus and the dense
/// interpolant (Cauchy interpolation). The denominator is returned monic.
fn cauchy_reconstruct(xs: &[u64], ys: &[u64], p: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let n = xs.len();
    let mut modp = vec![1u64];
    for &x in xs {
        modp = pp_mul(&modp, &[(p - x % p) % p, 1], p);
    }
    let mut f = newton_interp_modp(xs, ys, p);
    pp_trim(&mut f);
    let mut r0 = modp;
    let mut r1 = f;
    let mut v0: Vec<u64> = Vec::new();
    let mut v1: Vec<u64> = vec![1];
    let target = (n as isize - 1) / 2;
    while pp_deg(&r1) > target {
        let (q, r) = pp_divrem(&r0, &r1, p);
        let v = pp_sub(&v0, &pp_mul(&q, &v1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        v0 = std::mem::replace(&mut v1, v);
    }
    if v1.is_empty() {
        return None;
    }
    let g = pp_gcd(&r1, &v1, p);
    let (num, rem_n) = pp_divrem(&r1, &g, p);
    let (den, rem_d) = pp_divrem(&v1, &g, p);
    if !rem_n.is_empty() || !rem_d.is_empty() || den.is_empty() {
        return None;
    }
    let lcinv = powmod(*den.last().unwrap(), p - 2, p);
    Some((pp_scale(&num, lcinv, p), pp_scale(&den, lcinv, p)))
}

/// Signed rational a/b with |a|, |b| <= sqrt(m/2) congruent to `x` mod `m`,
/// recovered by the half-extended Euclidean algorithm (Wang's method).
fn rational_reconstruct(x: &num::BigInt, m: &num::BigInt) -> Option<BigRational> {
    use num::bigint::Sign;
    use num::{BigInt, Integer, Signed, Zero};
    let bound = (m / BigInt::from(2u32)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = x.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::from(1u32);
    while r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let t = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.sign() == Sign::Minus {
        r1 = -r1;
        t1 = -t1;
    }
    if r1.gcd(&t1) != BigInt::from(1u32) {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Dense integer coefficient vector of an entry that involves only variable
/// `var`, after the row has been cleared to integer coefficients.
type DenseEntry = Vec<num::BigInt>;

/// Nullspace basis by modular evaluation and interpolation, applicable when
/// the entries involve at most one variable. The canonical reduced-echelon
/// basis vector for each free column, scaled by the determinant of the
/// pivot submatrix, has polynomial coordinates (Cramer cofactors) of degree
/// at most the sum of the pivot rows' entry degrees; those coordinates are
/// interpolated from modular images and reconstructed by Chinese
/// remaindering, and the result is verified exactly before being returned.
/// Returns None when the shape does not apply or reconstruction fails, in
/// which case the caller falls back to symbolic elimination.
fn nullspace_interp(
    rows: &[Vec<Polynomial>],
    cols: usize,
    vars: &Vars,
) -> Result<Option<Vec<Vec<Polynomial>>>> {
    use num::{BigInt, One as _, Zero as _};
    if rows.is_empty() || cols == 0 {
        return Ok(None);
    }
    // Dispatch on the number of variables the matrix involves: one gets the
    // direct interpolation below, two the nested variant, more fall back to
    // symbolic elimination.
    let mut active: Vec<usize> = Vec::new();
    for row in rows {
        for e in row {
            for (m, _) in e.terms() {
                for (k, &ex) in m.0.iter().enumerate() {
                    if ex > 0 && !active.contains(&k) {
                        active.push(k);
                    }
                }
            }
        }
    }
    active.sort_unstable();
    if active.len() == 2 {
        return nullspace_interp2(rows, cols, vars, active[0], active[1]);
    }
    if active.len() > 2 {
        return Ok(None);
    }
    let var = active.first().copied().unwrap_or(0);

    // Clear each row to integer coefficients and flatten to dense
    // coefficient vectors in the active variable.
    let mut dense: Vec<Vec<DenseEntry>> = Vec::with_capacity(rows.len());
    let mut row_deg: Vec<usize> = Vec::with_capacity(rows.len());
    for row in rows {
        let irow = row_to_ipolys(row);
        let mut drow: Vec<DenseEntry> = Vec::with_capacity(row.len());
        let mut dmax = 0usize;
        for e in &irow {
            let deg = e.keys().map(|m| m.0[var] as usize).max().unwrap_or(0);
            let mut v = vec![BigInt::zero(); deg + 1];
            for (m, c) in e {
                v[m.0[var] as usize] = c.clone();
            }
            if !e.is_empty() {
                dmax = dmax.max(deg);
            }
            drow.push(v);
        }
        dense.push(drow);
        row_deg.push(dmax);
    }

    // Probe the generic pivot structure at a handful of points.
    let p0 = CRT_PRIMES[0];
    let to_modp = |prime: u64| -> Vec<Vec<Vec<u64>>> {
        dense
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(|c| bigint_mod(c, prime)).collect())
                    .collect()
            })
            .collect()
    };
    let eval_at = |img: &[Vec<Vec<u64>>], t: u64, prime: u64| -> Vec<Vec<u64>> {
        img.iter()
            .map(|row| row.iter().map(|e| eval_dense_modp(e, t, prime)).collect())
            .collect()
    };
    let img0 = to_modp(p0);
    let mut structure: Option<Vec<(usize, usize)>> = None;
    for t in 1..=5u64 {
        let (_, pivots, _) = rref_modp(eval_at(&img0, t, p0), cols, p0);
        let better = match &structure {
            None => true,
            Some(s) => {
                pivots.len() > s.len()
                    || (pivots.len() == s.len()
                        && pivots.iter().map(|&(_, c)| c).lt(s.iter().map(|&(_, c)| c)))
            }
        };
        if better {
            structure = Some(pivots);
        }
    }
    let structure = structure.unwrap_or_default();
    let pivot_cols: Vec<usize> = structure.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let bound: usize = structure.iter().map(|&(r, _)| row_deg[r]).sum();
    if bound > 4000 {
        return Ok(None);
    }
    let rank = structure.len();
    let nfree = free_cols.len();
    // Reconstruction point budget: the reduced coordinates are ratios of
    // cofactors, so numerator and denominator degrees are at most `bound`,
    // but in practice far smaller; start small and grow on failure.
    let cap = 2 * bound + 3;
    let mut npoints = 33usize.min(cap);
    const EXTRA: usize = 5;

    // Accumulated Chinese-remainder state: per free column, per matrix
    // column, the dense coefficient residues of the cleared basis vector
    // normalized to a monic first nonzero entry.
    let mut residues: Option<Vec<Vec<Vec<BigInt>>>> = None;
    let mut modulus = BigInt::one();

    'primes: for &prime in CRT_PRIMES.iter() {
        let img = to_modp(prime);
        let mut xs: Vec<u64> = Vec::new();
        // samples[k][si][fi]: value of the pivot coordinate `si` of the
        // basis vector for free column `fi` at point `xs[k]`.
        let mut samples: Vec<Vec<Vec<u64>>> = Vec::new();
        let mut t = 0u64;
        let mut skips = 0usize;
        // fracs[fi][si] = (num, den) with den monic.
        let fracs: Vec<Vec<(Vec<u64>, Vec<u64>)>> = loop {
            while xs.len() < npoints + EXTRA {
                t += 1;
                if t >= prime {
                    continue 'primes;
                }
                let (rref, pivots, _) = rref_modp(eval_at(&img, t, prime), cols, prime);
                if pivots != structure {
                    skips += 1;
                    if skips > 30 {
                        continue 'primes;
                    }
                    continue;
                }
                xs.push(t);
                samples.push(
                    structure
                        .iter()
                        .map(|&(pr, _)| {
                            free_cols
                                .iter()
                                .map(|&fc| (prime - rref[pr][fc]) % prime)
                                .collect()
                        })
                        .collect(),
                );
            }
            let mut fracs: Vec<Vec<(Vec<u64>, Vec<u64>)>> = Vec::with_capacity(nfree);
            let mut ok = true;
            'rec: for fi in 0..nfree {
                let mut row = Vec::with_capacity(rank);
                for si in 0..rank {
                    let ys: Vec<u64> = (0..npoints).map(|k| samples[k][si][fi]).collect();
                    let Some((num, den)) = cauchy_reconstruct(&xs[..npoints], &ys, prime)
                    else {
                        ok = false;
                        break 'rec;
                    };
                    for k in npoints..xs.len() {
                        let dv = eval_dense_modp(&den, xs[k], prime);
                        let nv = eval_dense_modp(&num, xs[k], prime);
                        if dv == 0 || nv != mulmod(samples[k][si][fi], dv, prime) {
                            ok = false;
                            break 'rec;
                        }
                    }
                    row.push((num, den));
                }
                fracs.push(row);
            }
            if ok {
                break fracs;
            }
            if npoints >= cap {
                return Ok(None);
            }
            npoints = (npoints * 2).min(cap);
        };

        // Clear each basis vector to coprime polynomial images with a monic
        // first nonzero entry, mirroring the exact normalization.
        let mut cleared: Vec<Vec<Vec<u64>>> = Vec::with_capacity(nfree);
        for (fi, &fc) in free_cols.iter().enumerate() {
            let mut lcm = vec![1u64];
            for (_, den) in &fracs[fi] {
                let g = pp_gcd(&lcm, den, prime);
                let (q, r) = pp_divrem(den, &g, prime);
                if !r.is_empty() {
                    continue 'primes;
                }
                lcm = pp_mul(&lcm, &q, prime);
            }
            let mut v: Vec<Vec<u64>> = vec![Vec::new(); cols];
            v[fc] = lcm.clone();
            for (si, &(_, pc)) in structure.iter().enumerate() {
                let (num, den) = &fracs[fi][si];
                if num.is_empty() {
                    continue;
                }
                let (q, r) = pp_divrem(&lcm, den, prime);
                if !r.is_empty() {
                    continue 'primes;
                }
                v[pc] = pp_mul(num, &q, prime);
            }
            let mut content: Vec<u64> = Vec::new();
            for e in &v {
                if e.is_empty() {
                    continue;
                }
                content = if content.is_empty() {
                    pp_monic(e, prime)
                } else {
                    pp_gcd(&content, e, prime)
                };
                if content.len() == 1 {
                    break;
                }
            }
            if content.len() > 1 {
                for e in v.iter_mut() {
                    if e.is_empty() {
                        continue;
                    }
                    let (q, r) = pp_divrem(e, &content, prime);
                    if !r.is_empty() {
                        continue 'primes;
                    }
                    *e = q;
                }
            }
            if let Some(first) = v.iter().find(|e| !e.is_empty()) {
                let inv = powmod(*first.last().unwrap(), prime - 2, prime);
                for e in v.iter_mut() {
                    *e = pp_scale(e, inv, prime);
                }
            }
            cleared.push(v);
        }

        // Fold into the Chinese-remainder accumulator; the degree pattern
        // must agree with earlier primes, otherwise the prime is unlucky.
        match &mut residues {
            None => {
                residues = Some(
                    cleared
                        .iter()
                        .map(|v| {
                            v.iter()
                                .map(|e| e.iter().map(|&c| BigInt::from(c)).collect())
                                .collect()
                        })
                        .collect(),
                );
                modulus = BigInt::from(prime);
            }
            Some(acc) => {
                let pattern_ok = acc.iter().zip(&cleared).all(|(av, cv)| {
                    av.iter().zip(cv).all(|(ae, ce)| ae.len() == ce.len())
                });
                if !pattern_ok {
                    continue 'primes;
                }
                let minv = powmod(bigint_mod(&modulus, prime), prime - 2, prime);
                for (av, cv) in acc.iter_mut().zip(&cleared) {
                    for (ae, ce) in av.iter_mut().zip(cv) {
                        for (a, &c) in ae.iter_mut().zip(ce) {
                            let delta = (c + prime - bigint_mod(a, prime)) % prime;
                            *a += &modulus * BigInt::from(mulmod(delta, minv, prime));
                        }
                    }
                }
                modulus *= BigInt::from(prime);
            }
        }

        // Attempt to lift the accumulated residues to rational coefficients
        // and verify the candidate exactly.
        let acc = residues.as_ref().unwrap();
        let mut basis: Vec<Vec<Polynomial>> = Vec::with_capacity(nfree);
        let mut lifted = true;
        'lift: for v in acc {
            let mut x: Vec<RationalFunction> = Vec::with_capacity(cols);
            for e in v {
                let mut terms: Vec<(Monomial, BigRational)> = Vec::new();
                for (k, c) in e.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let Some(q) = rational_reconstruct(c, &modulus) else {
                        lifted = false;
                        break 'lift;
                    };
                    let mut exps = vec![0u32; vars.len()];
                    exps[var] = k as u32;
                    terms.push((Monomial(exps), q));
                }
                x.push(RationalFunction::from_poly(Polynomial::from_terms(
                    vars, terms,
                )));
            }
            basis.push(clear_vector(&x, vars)?);
        }
        if lifted
            && basis
                .iter()
                .all(|v| v.iter().any(|e| !e.is_zero()) && is_nullvector(rows, v))
        {
            return Ok(Some(basis));
        }
    }
    Ok(None)
}

/// One univariate rational-function reconstruction from sample values: a
/// Cauchy fit through the first `used` points, checked against the rest.
fn rec_frac(xs: &[u64], ys: &[u64], used: usize, prime: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let (num, den) = cauchy_reconstruct(&xs[..used], &ys[..used], prime)?;
    for k in used..xs.len() {
        let dv = eval_dense_modp(&den, xs[k], prime);
        let nv = eval_dense_modp(&num, xs[k], prime);
        if dv == 0 || nv != mulmod(ys[k], dv, prime) {
            return None;
        }
    }
    Some((num, den))
}

/// Reduced fractions of every basis coordinate of the specialized
/// (univariate) matrix `spec`, or None when the line is degenerate: its
/// generic pivot structure differs from `structure`, or reconstruction does
/// not stabilize within the point budget `cap`. On success also returns the
/// point count that sufficed, so the caller can start the next line there.
fn reconstruct_line(
    spec: &[Vec<Vec<u64>>],
    cols: usize,
    structure: &[(usize, usize)],
    free_cols: &[usize],
    npoints: usize,
    cap: usize,
    prime: u64,
) -> Option<(Vec<Vec<(Vec<u64>, Vec<u64>)>>, usize)> {
    const EXTRA: usize = 5;
    let rank = structure.len();
    let nfree = free_cols.len();
    let mut np = npoints.clamp(1, cap.max(1));
    let mut xs: Vec<u64> = Vec::new();
    let mut samples: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut t = 0u64;
    let mut skips = 0usize;
    loop {
        while xs.len() < np + EXTRA {
            t += 1;
            if t >= prime {
                return None;
            }
            let m: Vec<Vec<u64>> = spec
                .iter()
                .map(|row| row.iter().map(|e| eval_dense_modp(e, t, prime)).collect())
                .collect();
            let (rref, pivots, _) = rref_modp(m, cols, prime);
            if pivots.as_slice() != structure {
                skips += 1;
                if skips > 30 {
                    return None;
                }
                continue;
            }
            xs.push(t);
            samples.push(
                structure
                    .iter()
                    .map(|&(pr, _)| {
                        free_cols
                            .iter()
                            .map(|&fc| (prime - rref[pr][fc]) % prime)
                            .collect()
                    })
                    .collect(),
            );
        }
        let mut fracs: Vec<Vec<(Vec<u64>, Vec<u64>)>> = Vec::with_capacity(nfree);
        let mut ok = true;
        'rec: for fi in 0..nfree {
            let mut row = Vec::with_capacity(rank);
            for si in 0..rank {
                let ys: Vec<u64> = (0..xs.len()).map(|k| samples[k][si][fi]).collect();
                let Some(fr) = rec_frac(&xs, &ys, np, prime) else {
                    ok = false;
                    break 'rec;
                };
                row.push(fr);
            }
            fracs.push(row);
        }
        if ok {
            return Some((fracs, np));
        }
        if np >= cap {
            return None;
        }
        np = (np * 2).min(cap);
    }
}

/// Assemble per-slot fractions in the outer variable into one bivariate
/// fraction modulo `p`: slot coefficients are brought over a common
/// denominator, common outer-variable content is removed, and the
/// denominator is scaled to a unit leading coefficient so the result is
/// canonical across primes. Slots index inner-variable powers, each holding
/// a dense outer-variable polynomial.
fn combine_slots(
    nfr: &[(Vec<u64>, Vec<u64>)],
    dfr: &[(Vec<u64>, Vec<u64>)],
    p: u64,
) -> Option<(Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    let mut lcm = vec![1u64];
    for (_, d) in nfr.iter().chain(dfr) {
        let g = pp_gcd(&lcm, d, p);
        let (q, r) = pp_divrem(d, &g, p);
        if !r.is_empty() {
            return None;
        }
        lcm = pp_mul(&lcm, &q, p);
    }
    let clear = |fr: &[(Vec<u64>, Vec<u64>)]| -> Option<Vec<Vec<u64>>> {
        fr.iter()
            .map(|(n, d)| {
                if n.is_empty() {
                    return Some(Vec::new());
                }
                let (q, r) = pp_divrem(&lcm, d, p);
                if r.is_empty() {
                    Some(pp_mul(n, &q, p))
                } else {
                    None
                }
            })
            .collect()
    };
    let mut ns = clear(nfr)?;
    let mut ds = clear(dfr)?;
    let content = |slots: &[Vec<u64>]| -> Vec<u64> {
        let mut g: Vec<u64> = Vec::new();
        for s in slots {
            if s.is_empty() {
                continue;
            }
            g = if g.is_empty() {
                pp_monic(s, p)
            } else {
                pp_gcd(&g, s, p)
            };
            if g.len() == 1 {
                break;
            }
        }
        g
    };
    let (cn, cd) = (content(&ns), content(&ds));
    let g = if cn.is_empty() {
        vec![1]
    } else {
        pp_gcd(&cn, &cd, p)
    };
    if g.len() > 1 {
        for s in ns.iter_mut().chain(ds.iter_mut()) {
            if s.is_empty() {
                continue;
            }
            let (q, r) = pp_divrem(s, &g, p);
            if !r.is_empty() {
                return None;
            }
            *s = q;
        }
    }
    let lc = *ds.iter().rev().find(|s| !s.is_empty())?.last()?;
    let inv = powmod(lc, p - 2, p);
    for s in ns.iter_mut().chain(ds.iter_mut()) {
        *s = pp_scale(s, inv, p);
    }
    Some((ns, ds))
}

/// Nullspace basis by nested evaluation and interpolation when the entries
/// involve exactly two variables. The matrix is specialized line by line in
/// the second variable; every basis coordinate of each line is reconstructed
/// as a reduced fraction of the first variable, and the slot coefficients of
/// those fractions are in turn reconstructed as fractions of the second
/// variable. The combined bivariate coordinates are lifted by Chinese
/// remaindering and the candidate is verified exactly before being returned;
/// None sends the caller to symbolic elimination.
fn nullspace_interp2(
    rows: &[Vec<Polynomial>],
    cols: usize,
    vars: &Vars,
    va: usize,
    vb: usize,
) -> Result<Option<Vec<Vec<Polynomial>>>> {
    use num::{BigInt, One as _, Zero as _};
    // Sparse integer terms of every entry, plus per-row degree bounds in
    // each variable for the Cramer-cofactor degree estimates.
    let mut terms_mat: Vec<Vec<Vec<(u32, u32, BigInt)>>> = Vec::with_capacity(rows.len());
    let mut row_deg_a: Vec<usize> = Vec::with_capacity(rows.len());
    let mut row_deg_b: Vec<usize> = Vec::with_capacity(rows.len());
    for row in rows {
        let irow = row_to_ipolys(row);
        let mut trow = Vec::with_capacity(row.len());
        let (mut da, mut db) = (0usize, 0usize);
        for e in &irow {
            let mut ts = Vec::with_capacity(e.len());
            for (m, c) in e {
                da = da.max(m.0[va] as usize);
                db = db.max(m.0[vb] as usize);
                ts.push((m.0[va], m.0[vb], c.clone()));
            }
            trow.push(ts);
        }
        terms_mat.push(trow);
        row_deg_a.push(da);
        row_deg_b.push(db);
    }
    let maxb: usize = row_deg_b.iter().copied().max().unwrap_or(0);

    let to_modp = |prime: u64| -> Vec<Vec<Vec<(u32, u32, u64)>>> {
        terms_mat
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.iter()
                            .map(|(ka, kb, c)| (*ka, *kb, bigint_mod(c, prime)))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };
    // Specialize the outer variable, leaving dense vectors in the inner one.
    let specialize = |img: &[Vec<Vec<(u32, u32, u64)>>], tb: u64, prime: u64| -> Vec<Vec<Vec<u64>>> {
        let mut pw = vec![1u64; maxb + 1];
        for k in 1..=maxb {
            pw[k] = mulmod(pw[k - 1], tb, prime);
        }
        img.iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let Some(da) = e.iter().map(|&(ka, _, _)| ka as usize).max() else {
                            return Vec::new();
                        };
                        let mut v = vec![0u64; da + 1];
                        for &(ka, kb, c) in e {
                            let i = ka as usize;
                            v[i] = (v[i] + mulmod(c, pw[kb as usize], prime)) % prime;
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    };

    // Probe the generic pivot structure at a handful of points.
    let p0 = CRT_PRIMES[0];
    let img0 = to_modp(p0);
    let mut structure: Option<Vec<(usize, usize)>> = None;
    for t in 1..=5u64 {
        let spec = specialize(&img0, t + 6, p0);
        let m: Vec<Vec<u64>> = spec
            .iter()
            .map(|row| row.iter().map(|e| eval_dense_modp(e, t, p0)).collect())
            .collect();
        let (_, pivots, _) = rref_modp(m, cols, p0);
        let better = match &structure {
            None => true,
            Some(s) => {
                pivots.len() > s.len()
                    || (pivots.len() == s.len()
                        && pivots.iter().map(|&(_, c)| c).lt(s.iter().map(|&(_, c)| c)))
            }
        };
        if better {
            structure = Some(pivots);
        }
    }
    let structure = structure.unwrap_or_default();
    let pivot_cols: Vec<usize> = structure.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let bound_a: usize = structure.iter().map(|&(r, _)| row_deg_a[r]).sum();
    let bound_b: usize = structure.iter().map(|&(r, _)| row_deg_b[r]).sum();
    if bound_a > 4000 || bound_b > 4000 {
        return Ok(None);
    }
    let rank = structure.len();
    let nfree = free_cols.len();
    let cap_a = 2 * bound_a + 3;
    let cap_b = 2 * bound_b + 3;
    let mut npa = 33usize.min(cap_a);
    let mut npb = 33usize.min(cap_b);
    const EXTRA: usize = 5;

    // Chinese-remainder accumulator: per basis vector, per pivot coordinate,
    // the slot-coefficient residues of the combined bivariate fraction.
    type BiFrac = (Vec<Vec<num::BigInt>>, Vec<Vec<num::BigInt>>);
    let mut residues: Option<Vec<Vec<BiFrac>>> = None;
    let mut modulus = BigInt::one();

    'primes: for &prime in CRT_PRIMES.iter() {
        let img = to_modp(prime);
        let mut xsb: Vec<u64> = Vec::new();
        let mut lines: Vec<Vec<Vec<(Vec<u64>, Vec<u64>)>>> = Vec::new();
        let mut pattern: Option<Vec<Vec<(usize, usize)>>> = None;
        let mut tb = 0u64;
        let mut skips = 0usize;
        // Slot fractions in the outer variable: [fi][si] -> (num, den) slots.
        type SlotFracs = Vec<Vec<(Vec<(Vec<u64>, Vec<u64>)>, Vec<(Vec<u64>, Vec<u64>)>)>>;
        let slotfracs: SlotFracs = loop {
            while xsb.len() < npb + EXTRA {
                tb += 1;
                if tb >= prime {
                    continue 'primes;
                }
                let spec = specialize(&img, tb, prime);
                let Some((fr, used)) =
                    reconstruct_line(&spec, cols, &structure, &free_cols, npa, cap_a, prime)
                else {
                    skips += 1;
                    if skips > 60 {
                        continue 'primes;
                    }
                    continue;
                };
                npa = used;
                let pat: Vec<Vec<(usize, usize)>> = fr
                    .iter()
                    .map(|r| r.iter().map(|(n, d)| (n.len(), d.len())).collect())
                    .collect();
                match &pattern {
                    None => pattern = Some(pat),
                    Some(p) if *p == pat => {}
                    Some(p) => {
                        let ge = pat
                            .iter()
                            .flatten()
                            .zip(p.iter().flatten())
                            .all(|(a, b)| a.0 >= b.0 && a.1 >= b.1);
                        if ge {
                            // Earlier lines were degenerate specializations.
                            pattern = Some(pat);
                            xsb.clear();
                            lines.clear();
                        } else {
                            skips += 1;
                            if skips > 60 {
                                continue 'primes;
                            }
                            continue;
                        }
                    }
                }
                xsb.push(tb);
                lines.push(fr);
            }
            let mut out: SlotFracs = Vec::with_capacity(nfree);
            let mut ok = true;
            'rec: for fi in 0..nfree {
                let mut orow = Vec::with_capacity(rank);
                for si in 0..rank {
                    let (nlen, dlen) = (lines[0][fi][si].0.len(), lines[0][fi][si].1.len());
                    let mut nsl = Vec::with_capacity(nlen);
                    let mut dsl = Vec::with_capacity(dlen);
                    for sk in 0..nlen + dlen {
                        let ys: Vec<u64> = lines
                            .iter()
                            .map(|ln| {
                                let fr = &ln[fi][si];
                                if sk < nlen {
                                    fr.0[sk]
                                } else {
                                    fr.1[sk - nlen]
                                }
                            })
                            .collect();
                        let Some(fr) = rec_frac(&xsb, &ys, npb, prime) else {
                            ok = false;
                            break 'rec;
                        };
                        if sk < nlen {
                            nsl.push(fr);
                        } else {
                            dsl.push(fr);
                        }
                    }
                    orow.push((nsl, dsl));
                }
                out.push(orow);
            }
            if ok {
                break out;
            }
            if npb >= cap_b {
                return Ok(None);
            }
            npb = (npb * 2).min(cap_b);
        };

        // Combine slots into bivariate fraction images.
        let mut combined: Vec<Vec<(Vec<Vec<u64>>, Vec<Vec<u64>>)>> = Vec::with_capacity(nfree);
        for frow in &slotfracs {
            let mut crow = Vec::with_capacity(rank);
            for (nsl, dsl) in frow {
                let Some(c) = combine_slots(nsl, dsl, prime) else {
                    continue 'primes;
                };
                crow.push(c);
            }
            combined.push(crow);
        }

        // Fold into the Chinese-remainder accumulator; the slot pattern must
        // agree with earlier primes, otherwise the prime is unlucky.
        match &mut residues {
            None => {
                residues = Some(
                    combined
                        .iter()
                        .map(|crow| {
                            crow.iter()
                                .map(|(ns, ds)| {
                                    let big = |ss: &Vec<Vec<u64>>| -> Vec<Vec<BigInt>> {
                                        ss.iter()
                                            .map(|s| s.iter().map(|&c| BigInt::from(c)).collect())
                                            .collect()
                                    };
                                    (big(ns), big(ds))
                                })
                                .collect()
                        })
                        .collect(),
                );
                modulus = BigInt::from(prime);
            }
            Some(acc) => {
                let pattern_ok = acc.iter().zip(&combined).all(|(ar, cr)| {
                    ar.iter().zip(cr).all(|((an, ad), (cn, cd))| {
                        an.len() == cn.len()
                            && ad.len() == cd.len()
                            && an.iter().zip(cn).all(|(a, c)| a.len() == c.len())
                            && ad.iter().zip(cd).all(|(a, c)| a.len() == c.len())
                    })
                });
                if !pattern_ok {
                    continue 'primes;
                }
                let minv = powmod(bigint_mod(&modulus, prime), prime - 2, prime);
                for (ar, cr) in acc.iter_mut().zip(&combined) {
                    for ((an, ad), (cn, cd)) in ar.iter_mut().zip(cr) {
                        for (asl, csl) in an.iter_mut().zip(cn).chain(ad.iter_mut().zip(cd)) {
                            for (a, &c) in asl.iter_mut().zip(csl) {
                                let delta = (c + prime - bigint_mod(a, prime)) % prime;
                                *a += &modulus * BigInt::from(mulmod(delta, minv, prime));
                            }
                        }
                    }
                }
                modulus *= BigInt::from(prime);
            }
        }

        // Attempt to lift the accumulated residues to rational coefficients
        // and verify the candidate exactly.
        let acc = residues.as_ref().unwrap();
        let mut basis: Vec<Vec<Polynomial>> = Vec::with_capacity(nfree);
        let mut lifted = true;
        'lift: for (fi, ar) in acc.iter().enumerate() {
            let mut x: Vec<RationalFunction> = vec![RationalFunction::zero(vars); cols];
            x[free_cols[fi]] = RationalFunction::one(vars);
            for (si, (an, ad)) in ar.iter().enumerate() {
                let lift_poly = |slots: &Vec<Vec<BigInt>>| -> Option<Polynomial> {
                    let mut terms: Vec<(Monomial, BigRational)> = Vec::new();
                    for (ka, s) in slots.iter().enumerate() {
                        for (kb, c) in s.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let q = rational_reconstruct(c, &modulus)?;
                            let mut exps = vec![0u32; vars.len()];
                            exps[va] = ka as u32;
                            exps[vb] = kb as u32;
                            terms.push((Monomial(exps), q));
                        }
                    }
                    Some(Polynomial::from_terms(vars, terms))
                };
                let (Some(num), Some(den)) = (lift_poly(an), lift_poly(ad)) else {
                    lifted = false;
                    break 'lift;
                };
                if den.is_zero() {
                    lifted = false;
                    break 'lift;
                }
                x[structure[si].1] = RationalFunction::new(num, den)?;
            }
            basis.push(clear_vector(&x, vars)?);
        }
        if lifted
            && basis.len() == nfree
            && basis
                .iter()
                .all(|v| v.iter().any(|e| !e.is_zero()) && is_nullvector(rows, v))
        {
            return Ok(Some(basis));
        }
    }
    Ok(None)
}

/// Exact matrix-vector product check: M * v == 0.
pub fn is_nullvector(rows: &[Vec<Polynomial>], v: &[Polynomial]) -> bool {
    for row in rows {
        let mut acc: Option<Polynomial> = None;
        for (e, x) in row.iter().zip(v) {
            if e.is_zero() || x.is_zero() {
                continue;
            }
            let prod = e.mul(x);
            acc = Some(match acc {
                None => prod,
                Some(a) => a.add(&prod),
            });
        }
        if let Some(a) = acc {
            if !a.is_zero() {
                return false;
            }
        }
    }
    true
}
