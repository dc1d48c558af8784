//! Modular multivariate gcd: per-prime dense evaluation/interpolation images,
//! Chinese remaindering, and an exact trial-division proof of the result.
//!
//! The subresultant-style recursive gcd in `poly` swells catastrophically on
//! dense inputs in three or more variables, so `poly_gcd` first tries this
//! path. Soundness does not depend on any probabilistic choice: a candidate
//! is only returned after it exactly divides both inputs over the rationals.
//! Unlucky primes or evaluation points can at worst delay the answer.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::linalg::{
    bigint_mod, eval_dense_modp, mulmod, newton_interp_modp, powmod, pp_divrem, pp_gcd,
    CRT_PRIMES,
};
use crate::poly::{Monomial, Polynomial};

/// Sparse polynomial image modulo a prime: exponent vector -> residue.
type MP = BTreeMap<Monomial, u64>;

fn mp_from_poly(f: &Polynomial, p: u64) -> MP {
    let mut out = MP::new();
    for (m, c) in f.terms() {
        // Inputs are unit-normalized, so every coefficient is an integer.
        let r = bigint_mod(c.numer(), p);
        if r != 0 {
            out.insert(m.clone(), r);
        }
    }
    out
}

fn mp_is_constant(f: &MP) -> bool {
    f.keys().all(|m| m.is_one())
}

fn mp_deg_in(f: &MP, v: usize) -> u32 {
    f.keys().map(|m| m.0[v]).max().unwrap_or(0)
}

/// Substitute variable `v` by the scalar `t`.
fn mp_eval_var(f: &MP, v: usize, t: u64, p: u64) -> MP {
    let mut out = MP::new();
    for (m, &c) in f {
        let mut m2 = m.clone();
        let e = std::mem::replace(&mut m2.0[v], 0);
        let val = mulmod(c, powmod(t, e as u64, p), p);
        let entry = out.entry(m2).or_insert(0);
        *entry = (*entry + val) % p;
    }
    out.retain(|_, &mut c| c != 0);
    out
}

/// Scale so the graded-lex leading coefficient becomes 1.
fn mp_monic(mut f: MP, p: u64) -> MP {
    if let Some((_, &lc)) = f.last_key_value() {
        let inv = powmod(lc, p - 2, p);
        for c in f.values_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    f
}

fn mp_scale(mut f: MP, s: u64, p: u64) -> MP {
    for c in f.values_mut() {
        *c = mulmod(*c, s, p);
    }
    f
}

/// Exact multivariate division modulo `p`; `None` if it does not divide.
fn mp_div_exact(a: &MP, b: &MP, p: u64) -> Option<MP> {
    let (lm_b, &lc_b) = b.last_key_value()?;
    let lc_inv = powmod(lc_b, p - 2, p);
    let mut r = a.clone();
    let mut q = MP::new();
    while let Some((lm_r, &lc_r)) = r.last_key_value() {
        let qm = lm_r.try_div(lm_b)?;
        let qc = mulmod(lc_r, lc_inv, p);
        for (m, &c) in b {
            let key = Monomial(m.0.iter().zip(&qm.0).map(|(x, y)| x + y).collect());
            let e = r.entry(key).or_insert(0);
            *e = (*e + p - mulmod(qc, c, p)) % p;
        }
        r.retain(|_, &mut c| c != 0);
        q.insert(qm, qc);
    }
    Some(q)
}

/// View `f` as a polynomial in variable `v` with multivariate coefficients:
/// per residual monomial, the dense univariate coefficient vector in `v`.
fn mp_split_by(f: &MP, v: usize) -> BTreeMap<Monomial, Vec<u64>> {
    let mut out: BTreeMap<Monomial, Vec<u64>> = BTreeMap::new();
    for (m, &c) in f {
        let mut m2 = m.clone();
        let e = std::mem::replace(&mut m2.0[v], 0) as usize;
        let slot = out.entry(m2).or_default();
        if slot.len() <= e {
            slot.resize(e + 1, 0);
        }
        // Each (residual monomial, exponent) slot is hit exactly once.
        slot[e] = c;
    }
    out
}

fn mp_join(split: BTreeMap<Monomial, Vec<u64>>, v: usize) -> MP {
    let mut out = MP::new();
    for (m, coeffs) in split {
        for (e, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut m2 = m.clone();
                m2.0[v] = e as u32;
                out.insert(m2, c);
            }
        }
    }
    out
}

/// Content of `f` with respect to `v`: monic univariate gcd (in `v`) of its
/// coefficient vectors. Returns the content and the primitive part.
fn mp_content_wrt(f: &MP, v: usize, p: u64) -> (Vec<u64>, MP) {
    let split = mp_split_by(f, v);
    let mut cont: Vec<u64> = Vec::new();
    for coeffs in split.values() {
        cont = pp_gcd(&cont, coeffs, p);
        if cont.len() == 1 {
            break;
        }
    }
    if cont.len() <= 1 {
        return (vec![1], f.clone());
    }
    let mut pp = BTreeMap::new();
    for (m, coeffs) in split {
        let (q, r) = pp_divrem(&coeffs, &cont, p);
        debug_assert!(r.is_empty());
        pp.insert(m, q);
    }
    (cont, mp_join(pp, v))
}

/// Coefficient (a dense polynomial in `v`) of the graded-lex-largest
/// residual monomial of `f` outside `v`.
fn mp_leading_wrt(f: &MP, v: usize) -> Vec<u64> {
    let split = mp_split_by(f, v);
    split.into_iter().next_back().map(|(_, c)| c).unwrap_or_default()
}

/// Gcd image modulo `p` over the active variable set, normalized monic with
/// respect to the graded-lex leading term. `None` signals an unlucky prime.
fn mgcd_p(a: &MP, b: &MP, p: u64) -> Option<MP> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let nvars = a.keys().next().map(|m| m.0.len()).unwrap_or(0);
    let active: Vec<usize> = (0..nvars)
        .filter(|&v| mp_deg_in(a, v) > 0 || mp_deg_in(b, v) > 0)
        .collect();
    if active.is_empty() {
        let mut one = MP::new();
        one.insert(Monomial(vec![0; nvars]), 1);
        return Some(one);
    }
    if active.len() == 1 {
        let v = active[0];
        let to_dense = |f: &MP| {
            let mut out = vec![0u64; mp_deg_in(f, v) as usize + 1];
            for (m, &c) in f {
                out[m.0[v] as usize] = c;
            }
            out
        };
        let g = pp_gcd(&to_dense(a), &to_dense(b), p);
        let mut out = MP::new();
        for (e, &c) in g.iter().enumerate() {
            if c != 0 {
                let mut m = vec![0u32; nvars];
                m[v] = e as u32;
                out.insert(Monomial(m), c);
            }
        }
        return Some(out);
    }

    // Interpolate in the last active variable; recurse on the rest.
    let z = *active.last().unwrap();
    let (cont_a, a_pp) = mp_content_wrt(a, z, p);
    let (cont_b, b_pp) = mp_content_wrt(b, z, p);
    let cont_g = pp_gcd(&cont_a, &cont_b, p);

    // The gcd's leading coefficient with respect to z divides this.
    let gamma = pp_gcd(&mp_leading_wrt(&a_pp, z), &mp_leading_wrt(&b_pp, z), p);
    let dz = mp_deg_in(&a_pp, z).min(mp_deg_in(&b_pp, z)) as usize;
    let need = dz + gamma.len();

    let mut pts: Vec<u64> = Vec::new();
    let mut images: Vec<MP> = Vec::new();
    let mut best_lm: Option<Monomial> = None;
    let mut t = 0u64;
    let t_cap = (need as u64) * 8 + 64;
    while images.len() < need {
        if t >= t_cap || t >= p {
            return None;
        }
        let tv = t;
        t += 1;
        let gt = eval_dense_modp(&gamma, tv, p);
        if gt == 0 {
            continue;
        }
        let at = mp_eval_var(&a_pp, z, tv, p);
        let bt = mp_eval_var(&b_pp, z, tv, p);
        if at.is_empty() || bt.is_empty() {
            continue;
        }
        let Some(h) = mgcd_p(&at, &bt, p) else { continue };
        let lm = h.last_key_value()?.0.clone();
        match &best_lm {
            Some(best) if lm > *best => continue,
            Some(best) if lm < *best => {
                best_lm = Some(lm);
                pts.clear();
                images.clear();
            }
            None => best_lm = Some(lm),
            _ => {}
        }
        pts.push(tv);
        images.push(mp_scale(h, gt, p));
    }

    // Dense Newton interpolation in z, per residual monomial.
    let support: std::collections::BTreeSet<Monomial> =
        images.iter().flat_map(|h| h.keys().cloned()).collect();
    let mut interp: BTreeMap<Monomial, Vec<u64>> = BTreeMap::new();
    for m in support {
        let ys: Vec<u64> = images
            .iter()
            .map(|h| h.get(&m).copied().unwrap_or(0))
            .collect();
        let mut coeffs = newton_interp_modp(&pts, &ys, p);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if !coeffs.is_empty() {
            interp.insert(m, coeffs);
        }
    }
    let w = mp_join(interp, z);
    let (_, mut h_pp) = mp_content_wrt(&w, z, p);

    // The scaled interpolant must reproduce both primitive parts exactly;
    // otherwise some image was unlucky and the prime is abandoned.
    if mp_div_exact(&a_pp, &h_pp, p).is_none() || mp_div_exact(&b_pp, &h_pp, p).is_none() {
        return None;
    }

    if cont_g.len() > 1 {
        let mut with_cont = MP::new();
        for (m, &c) in &h_pp {
            for (e, &g) in cont_g.iter().enumerate() {
                if g == 0 {
                    continue;
                }
                let mut m2 = m.clone();
                m2.0[z] += e as u32;
                let slot = with_cont.entry(m2).or_insert(0);
                *slot = (*slot + mulmod(c, g, p)) % p;
            }
        }
        h_pp = with_cont;
    }
    Some(mp_monic(h_pp, p))
}

fn crt_lift(images: &[(u64, MP)], vars: &crate::poly::Vars) -> Polynomial {
    let support: std::collections::BTreeSet<Monomial> = images
        .iter()
        .flat_map(|(_, h)| h.keys().cloned())
        .collect();
    let mut terms: Vec<(Monomial, num::BigRational)> = Vec::new();
    let modulus: BigInt = images.iter().map(|(p, _)| BigInt::from(*p)).product();
    let half = &modulus / BigInt::from(2);
    for m in support {
        let mut x = BigInt::zero();
        let mut acc = BigInt::one();
        for (p, h) in images {
            let r = h.get(&m).copied().unwrap_or(0);
            let cur = bigint_mod(&x, *p);
            let diff = (r + *p - cur) % *p;
            let inv = powmod(bigint_mod(&acc, *p), *p - 2, *p);
            let t = mulmod(diff, inv, *p);
            x += &acc * BigInt::from(t);
            acc *= BigInt::from(*p);
        }
        if x > half {
            x -= &modulus;
        }
        if !x.is_zero() {
            terms.push((m, num::BigRational::from_integer(x)));
        }
    }
    Polynomial::from_terms(vars, terms)
}

/// Modular gcd of two nonzero polynomials, or `None` if every prime in the
/// pool failed (the caller falls back to the subresultant recursion).
pub(crate) fn modular_gcd(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let an = a.unit_normalize();
    let bn = b.unit_normalize();
    let lc_a = an.leading()?.1.numer().clone();
    let lc_b = bn.leading()?.1.numer().clone();
    let gamma: BigInt = lc_a.gcd(&lc_b);
    debug_assert!(gamma.is_positive());

    let mut images: Vec<(u64, MP)> = Vec::new();
    let mut best_lm: Option<Monomial> = None;
    for &p in CRT_PRIMES.iter() {
        if bigint_mod(&lc_a, p) == 0 || bigint_mod(&lc_b, p) == 0 {
            continue;
        }
        let ap = mp_from_poly(&an, p);
        let bp = mp_from_poly(&bn, p);
        let Some(g) = mgcd_p(&ap, &bp, p) else { continue };
        if mp_is_constant(&g) {
            // The true gcd's image divides every per-prime gcd, so a
            // constant image proves the gcd itself is constant.
            return Some(Polynomial::one(an.vars()));
        }
        let lm = g.last_key_value()?.0.clone();
        match &best_lm {
            Some(best) if lm > *best => continue,
            Some(best) if lm < *best => {
                best_lm = Some(lm);
                images.clear();
            }
            None => best_lm = Some(lm),
            _ => {}
        }
        images.push((p, mp_scale(g, bigint_mod(&gamma, p), p)));

        let cand = crt_lift(&images, an.vars()).unit_normalize();
        if !cand.is_zero() && cand.divides(&an) && cand.divides(&bn) {
            return Some(cand);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::vars;

    fn p(s: &str) -> Polynomial {
        parse_poly(s, &vars(&["x", "y", "z"])).unwrap()
    }

    #[test]
    fn recovers_planted_factor() {
        let g = p("(x + y - 2*z)^2 * (x*y + 3)");
        let a = g.mul(&p("x^2 + y + 1"));
        let b = g.mul(&p("x - y*z + 5"));
        let got = modular_gcd(&a, &b).unwrap();
        assert_eq!(got, g.unit_normalize());
    }

    #[test]
    fn coprime_inputs_give_one() {
        let a = p("x^3*y + z + 1");
        let b = p("x*z^2 - y + 7");
        let got = modular_gcd(&a, &b).unwrap();
        assert!(got.is_one(), "got {got}");
    }
}
