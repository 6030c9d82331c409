//! Factorisation over Q: squarefree decomposition, then the Zassenhaus
//! method (modular factorisation, Hensel lifting, subset recombination).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::arith::is_prime;
use super::gfpoly::{self, GfPoly};
use super::poly::{PolyInt, QPoly};
use super::AlgebraError;

/// Cap on the number of candidate subsets examined during recombination.
const RECOMBINATION_BUDGET: usize = 2_000_000;

/// Number of admissible primes compared when picking the modular image.
const PRIME_TRIALS: usize = 4;

/// Canonical order on integer polynomials: degree, then coefficients from
/// the top down.
pub fn canonical_cmp(a: &PolyInt, b: &PolyInt) -> Ordering {
    a.coeffs()
        .len()
        .cmp(&b.coeffs().len())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Irreducible factors over Q as primitive integer polynomials with
/// positive leading coefficient, with multiplicities, canonically sorted.
pub fn factor_over_q(f: &QPoly) -> Result<Vec<(PolyInt, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition_q(f) {
        for g in factor_squarefree(&part.to_primitive_int())? {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

pub fn is_irreducible_over_q(f: &QPoly) -> Result<bool, AlgebraError> {
    if f.deg() == 0 {
        return Ok(false);
    }
    let factors = factor_over_q(f)?;
    Ok(factors.len() == 1 && factors[0].1 == 1)
}

/// Yun's algorithm over Q; returns monic squarefree parts with their
/// multiplicities.
pub fn squarefree_decomposition_q(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let b = f.gcd(&df);
    let mut c = f.div_rem(&b).0;
    let mut d = df.div_rem(&b).0.sub(&c.derivative());
    let mut i = 1;
    while c.deg() > 0 {
        let a = c.gcd(&d);
        c = c.div_rem(&a).0;
        d = d.div_rem(&a).0.sub(&c.derivative());
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Fast sufficient test for squarefreeness: some prime not dividing the
/// leading coefficient keeps the reduction squarefree. A `false` answer
/// may be spurious only if every trial prime divides the discriminant.
pub fn probably_squarefree(f: &PolyInt) -> bool {
    let lead = f.leading();
    let mut tried = 0;
    let mut p = (1u64 << 61) - 1;
    while tried < 6 {
        while !is_prime(p) {
            p -= 2;
        }
        if !(&lead % BigInt::from(p)).is_zero() {
            let fp = f.mod_p(p);
            if fp.gcd(&fp.derivative()).is_one() {
                return true;
            }
            tried += 1;
        }
        p -= 2;
    }
    false
}

/// Factor a squarefree integer polynomial of positive degree.
pub fn factor_squarefree(f: &PolyInt) -> Result<Vec<PolyInt>, AlgebraError> {
    let f = f.primitive_part();
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut f = f;
    if f.coeff(0).is_zero() {
        out.push(PolyInt::x());
        f = f.exact_div(&PolyInt::x()).expect("x divides f");
    }
    if f.deg() == 1 {
        out.push(f);
    } else if f.deg() > 1 {
        out.extend(zassenhaus(&f)?);
    }
    out.sort_by(canonical_cmp);
    Ok(out)
}

fn choose_prime(f: &PolyInt) -> (u64, Vec<GfPoly>) {
    let lead = f.leading();
    let mut best: Option<(u64, Vec<GfPoly>)> = None;
    let mut found = 0;
    let mut p = 3u64;
    while found < PRIME_TRIALS {
        if is_prime(p) && !(&lead % BigInt::from(p)).is_zero() {
            let fp = f.mod_p(p);
            if fp.gcd(&fp.derivative()).is_one() {
                found += 1;
                let factors: Vec<GfPoly> = gfpoly::factor(&fp)
                    .expect("prime modulus, nonzero polynomial")
                    .into_iter()
                    .map(|(g, _)| g)
                    .collect();
                let better = best.as_ref().is_none_or(|(_, b)| factors.len() < b.len());
                if better {
                    let done = factors.len() == 1;
                    best = Some((p, factors));
                    if done {
                        break;
                    }
                }
            }
        }
        p += 2;
    }
    best.expect("some prime keeps a squarefree polynomial squarefree")
}

fn lift_gf(g: &GfPoly) -> PolyInt {
    PolyInt::new(g.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let ext = a.mod_floor(m).extended_gcd(m);
    assert!(ext.gcd.is_one(), "unit modulo m");
    ext.x.mod_floor(m)
}

fn mul_mod(a: &PolyInt, b: &PolyInt, m: &BigInt) -> PolyInt {
    a.mul(b).reduce_mod(m)
}

/// Division by a polynomial whose leading coefficient is a unit mod `m`.
fn div_rem_mod(a: &PolyInt, b: &PolyInt, m: &BigInt) -> (PolyInt, PolyInt) {
    let db = b.deg();
    let inv = mod_inverse(&b.leading(), m);
    let mut rem: Vec<BigInt> = a.reduce_mod(m).coeffs().to_vec();
    if rem.len() <= db {
        return (PolyInt::zero(), PolyInt::new(rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        let q = (c * &inv).mod_floor(m);
        for (j, bj) in b.coeffs().iter().enumerate() {
            let k = i - db + j;
            rem[k] = (&rem[k] - &q * bj).mod_floor(m);
        }
        quot[i - db] = q;
    }
    rem.truncate(db);
    (PolyInt::new(quot), PolyInt::new(rem).reduce_mod(m))
}

/// Lift `f = g*h mod p` to `mod target`, `h` monic; returns `(g, h)`.
fn hensel_pair(
    f: &PolyInt,
    g0: &GfPoly,
    h0: &GfPoly,
    p: u64,
    target: &BigInt,
) -> (PolyInt, PolyInt) {
    let (one, s0, t0) = g0.ext_gcd(h0);
    debug_assert!(one.is_one());
    let mut m = BigInt::from(p);
    let (mut g, mut h, mut s, mut t) = (lift_gf(g0), lift_gf(h0), lift_gf(&s0), lift_gf(&t0));
    while &m < target {
        let m2 = (&m * &m).min(target.clone());
        let e = f.sub(&g.mul(&h)).reduce_mod(&m2);
        let (q, r) = div_rem_mod(&mul_mod(&s, &e, &m2), &h, &m2);
        let g_new = g.add(&t.mul(&e)).add(&q.mul(&g)).reduce_mod(&m2);
        let h_new = h.add(&r).reduce_mod(&m2);
        let b = s
            .mul(&g_new)
            .add(&t.mul(&h_new))
            .sub(&PolyInt::one())
            .reduce_mod(&m2);
        let (c, d) = div_rem_mod(&mul_mod(&s, &b, &m2), &h_new, &m2);
        s = s.sub(&d).reduce_mod(&m2);
        t = t.sub(&t.mul(&b)).sub(&c.mul(&g_new)).reduce_mod(&m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (g.reduce_mod(target), h.reduce_mod(target))
}

/// Lift the monic modular factors of `f` to monic factors mod `target`.
fn hensel_multi(f: &PolyInt, factors: &[GfPoly], p: u64, target: &BigInt) -> Vec<PolyInt> {
    if factors.len() == 1 {
        let inv = mod_inverse(&f.leading(), target);
        return vec![f.scale(&inv).reduce_mod(target)];
    }
    let k = factors.len() / 2;
    let lead = f.leading().mod_floor(&BigInt::from(p));
    let lead_u = u64::try_from(&lead).expect("reduced mod p");
    let left = factors[..k]
        .iter()
        .fold(GfPoly::constant(p, lead_u), |acc, g| acc.mul(g));
    let right = factors[k..]
        .iter()
        .fold(GfPoly::one(p), |acc, g| acc.mul(g));
    let (g, h) = hensel_pair(f, &left, &right, p, target);
    let mut out = hensel_multi(&g, &factors[..k], p, target);
    out.extend(hensel_multi(&h, &factors[k..], p, target));
    out
}

fn zassenhaus(f: &PolyInt) -> Result<Vec<PolyInt>, AlgebraError> {
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let n = f.deg();
    let bound = f.leading().abs() * (BigInt::one() << n) * f.l2_norm_ceil();
    let twice = bound * 2;
    let pb = BigInt::from(p);
    let mut target = pb.clone();
    while target <= twice {
        target *= &pb;
    }
    let lifted = hensel_multi(f, &modular, p, &target);

    let mut remaining: Vec<PolyInt> = lifted;
    let mut f = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    let mut budget = RECOMBINATION_BUDGET;
    while 2 * size <= remaining.len() {
        let mut hit: Option<(Vec<usize>, PolyInt)> = None;
        let lead = f.leading();
        let lead_const = &lead * f.coeff(0);
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if budget == 0 {
                return Err(AlgebraError::SearchBudget);
            }
            budget -= 1;
            let constant = subset.iter().fold(lead.clone(), |acc, &i| {
                (acc * remaining[i].coeff(0)).mod_floor(&target)
            });
            let constant = symmetric(&constant, &target);
            let plausible = constant.is_zero() || (&lead_const % &constant).is_zero();
            if plausible {
                let g = subset
                    .iter()
                    .fold(PolyInt::new(vec![lead.clone()]), |acc, &i| {
                        mul_mod(&acc, &remaining[i], &target)
                    })
                    .symmetric_mod(&target)
                    .primitive_part();
                if let Some(q) = f.exact_div(&g) {
                    hit = Some((subset.clone(), q));
                    out.push(g);
                }
            }
            if hit.is_some() || !next_combination(&mut subset, remaining.len()) {
                break;
            }
        }
        match hit {
            Some((subset, quotient)) => {
                f = quotient;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    if f.deg() > 0 {
        out.push(f.primitive_part());
    }
    Ok(out)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if r > m / 2 {
        r - m
    } else {
        r
    }
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
