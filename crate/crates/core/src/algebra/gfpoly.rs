//! Dense univariate polynomials over a prime field F_p and their
//! factorisation into monic irreducibles.
//!
//! Factorisation runs squarefree decomposition, distinct-degree
//! decomposition and then Cantor–Zassenhaus equal-degree splitting driven by
//! a ChaCha stream seeded from the process seed, the prime and the input.
//! Small pieces (degree at most 4 over small primes) are split by exhaustive
//! search instead, so they never touch the random stream.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use super::AlgebraError;

pub const DEFAULT_SEED: u64 = 0x5eed_2009;

static FACTOR_SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Seed used by randomized equal-degree splitting.
pub fn factor_seed() -> u64 {
    FACTOR_SEED.load(AtomicOrdering::Relaxed)
}

/// Set the process-wide splitting seed. Factorisations are canonical
/// (sorted) whatever the seed; only the work done to find them changes.
pub fn set_factor_seed(seed: u64) {
    FACTOR_SEED.store(seed, AtomicOrdering::Relaxed);
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfPoly {
    p: u64,
    /// Constant term first, no trailing zeros.
    coeffs: Vec<u64>,
}

impl fmt::Debug for GfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for GfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl GfPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = GfPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        GfPoly::new(
            p,
            coeffs
                .iter()
                .map(|&c| super::arith::reduce_i64(c, p))
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        GfPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        GfPoly::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        GfPoly::new(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        GfPoly::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with zero mapped to 0; handy where zero was already excluded.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        GfPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        GfPoly::new(
            p,
            (0..n)
                .map(|i| (self.coeff(i) + other.coeff(i)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        GfPoly::new(
            p,
            (0..n)
                .map(|i| (self.coeff(i) + p - other.coeff(i)) % p)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        GfPoly::zero(self.p).sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return GfPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let limit = u128::MAX / 2;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let slot = &mut out[i + j];
                *slot += a as u128 * b as u128;
                if *slot > limit {
                    *slot %= p as u128;
                }
            }
        }
        GfPoly::new(p, out.into_iter().map(|c| (c % p as u128) as u64).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.deg();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (GfPoly::zero(p), self.clone());
        }
        let inv_lead = inv_mod(divisor.leading(), p).expect("unit leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = mul_mod(c, inv_lead, p);
            quot[i - dd] = q;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + p - mul_mod(q, b, p)) % p;
            }
        }
        rem.truncate(dd);
        (GfPoly::new(p, quot), GfPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact division; panics if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (GfPoly::one(p), GfPoly::zero(p));
        let (mut t0, mut t1) = (GfPoly::zero(p), GfPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), p).expect("unit");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        GfPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = GfPoly::one(self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            exp >>= 1;
        }
        acc
    }

    /// Polynomial composition `self(inner)` reduced mod `modulus`.
    pub fn compose_mod(&self, inner: &Self, modulus: &Self) -> Self {
        let mut acc = GfPoly::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .mul_mod(inner, modulus)
                .add(&GfPoly::constant(self.p, c));
        }
        acc.rem(modulus)
    }

    /// Whether the polynomial is irreducible over F_p (degree at least 1).
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        if !f.gcd(&f.derivative()).is_one() {
            return false;
        }
        let x = GfPoly::x(self.p);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(self.p as u128, &f);
            if !h.sub(&x).gcd(&f).is_one() {
                return false;
            }
        }
        true
    }

    /// Canonical ordering: by degree, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Factor `f` over F_p into monic irreducible factors with multiplicities,
/// sorted canonically.
pub fn factor(f: &GfPoly) -> Result<Vec<(GfPoly, u32)>, AlgebraError> {
    let p = f.modulus();
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let f = f.monic();
    let mut out = Vec::new();
    let mut rng = splitting_rng(&f);
    for (part, mult) in squarefree_decomposition(&f) {
        for (d, piece) in distinct_degree(&part) {
            for irred in equal_degree(&piece, d, &mut rng) {
                out.push((irred, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

fn splitting_rng(f: &GfPoly) -> ChaCha8Rng {
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    factor_seed().hash(&mut hasher);
    f.hash(&mut hasher);
    ChaCha8Rng::seed_from_u64(hasher.finish())
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i` and each `g_i` squarefree, monic and non-constant.
pub fn squarefree_decomposition(f: &GfPoly) -> Vec<(GfPoly, u32)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(f)) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&pth_root(&c.monic())) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn pth_root(f: &GfPoly) -> GfPoly {
    let p = f.modulus() as usize;
    GfPoly::new(f.modulus(), f.coeffs().iter().step_by(p).copied().collect())
}

/// Distinct-degree decomposition of a squarefree monic polynomial.
pub fn distinct_degree(f: &GfPoly) -> Vec<(usize, GfPoly)> {
    let p = f.modulus();
    let x = GfPoly::x(p);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(p as u128, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((d, g));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

const EXHAUSTIVE_LINEAR_MAX_P: u64 = 1000;
const EXHAUSTIVE_QUADRATIC_MAX_P: u64 = 100;

/// Split a squarefree monic product of irreducibles of degree `d`.
fn equal_degree(f: &GfPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<GfPoly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let p = f.modulus();
    if n <= 4 {
        if d == 1 && p <= EXHAUSTIVE_LINEAR_MAX_P {
            return (0..p)
                .filter(|&r| f.eval(r) == 0)
                .map(|r| GfPoly::new(p, vec![(p - r) % p, 1]))
                .collect();
        }
        if d == 2 && p <= EXHAUSTIVE_QUADRATIC_MAX_P {
            if let Some(q) = exhaustive_quadratic_factor(f) {
                let mut parts = vec![q.clone(), f.exact_div(&q)];
                parts.sort_by(|a, b| a.canonical_cmp(b));
                return parts;
            }
        }
    }
    let mut stack = vec![f.clone()];
    let mut out = Vec::new();
    while let Some(g) = stack.pop() {
        if g.deg() == d {
            out.push(g);
            continue;
        }
        loop {
            let split = random_split(&g, d, rng);
            if !split.is_one() && split.deg() < g.deg() {
                let other = g.exact_div(&split);
                stack.push(split);
                stack.push(other);
                break;
            }
        }
    }
    out
}

fn exhaustive_quadratic_factor(f: &GfPoly) -> Option<GfPoly> {
    let p = f.modulus();
    for b in 0..p {
        for c in 0..p {
            let q = GfPoly::new(p, vec![c, b, 1]);
            if f.rem(&q).is_zero() {
                return Some(q);
            }
        }
    }
    None
}

/// One Cantor–Zassenhaus attempt: a gcd that is a proper factor with
/// probability about one half.
fn random_split(g: &GfPoly, d: usize, rng: &mut ChaCha8Rng) -> GfPoly {
    let p = g.modulus();
    let n = g.deg();
    let a = GfPoly::new(p, (0..n).map(|_| rng.random_range(0..p)).collect());
    if a.deg() == 0 {
        return GfPoly::one(p);
    }
    let common = a.gcd(g);
    if !common.is_one() {
        return common;
    }
    if p == 2 {
        // absolute trace a + a^2 + ... + a^(2^(d-1))
        let mut term = a.clone();
        let mut trace = a.clone();
        for _ in 1..d {
            term = term.mul_mod(&term, g);
            trace = trace.add(&term);
        }
        return trace.gcd(g);
    }
    // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
    let mut frob = a.clone();
    let mut norm = a.clone();
    for _ in 1..d {
        frob = frob.pow_mod(p as u128, g);
        norm = norm.mul_mod(&frob, g);
    }
    let b = norm.pow_mod(((p - 1) / 2) as u128, g);
    b.sub(&GfPoly::one(p)).gcd(g)
}

/// Roots of `f` in F_p, sorted.
pub fn roots(f: &GfPoly) -> Result<Vec<u64>, AlgebraError> {
    Ok(factor(f)?
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| (f.modulus() - g.coeff(0)) % f.modulus())
        .collect())
}

#[allow(dead_code)]
pub(crate) fn pow_mod_u64(a: u64, e: u64, p: u64) -> u64 {
    pow_mod(a, e, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(p: u64, fs: &[(GfPoly, u32)]) -> GfPoly {
        fs.iter().fold(GfPoly::one(p), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| a.mul(g))
        })
    }

    #[test]
    fn x2_plus_1() {
        let f5 = factor(&GfPoly::from_i64(5, &[1, 0, 1])).unwrap();
        assert_eq!(
            f5,
            vec![
                (GfPoly::from_i64(5, &[2, 1]), 1),
                (GfPoly::from_i64(5, &[3, 1]), 1)
            ]
        );
        let f7 = factor(&GfPoly::from_i64(7, &[1, 0, 1])).unwrap();
        assert_eq!(f7, vec![(GfPoly::from_i64(7, &[1, 0, 1]), 1)]);
    }

    #[test]
    fn cyclotomic_5_mod_2_is_irreducible() {
        let phi5 = GfPoly::from_i64(2, &[1, 1, 1, 1, 1]);
        // exhaustive: no roots and no quadratic factor over F_2
        assert!((0..2).all(|r| phi5.eval(r) != 0));
        for c in 0..2 {
            for b in 0..2 {
                let q = GfPoly::new(2, vec![c, b, 1]);
                assert!(!phi5.rem(&q).is_zero());
            }
        }
        assert_eq!(factor(&phi5).unwrap(), vec![(phi5.clone(), 1)]);
        assert!(phi5.is_irreducible());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            factor(&GfPoly::from_i64(9, &[1, 1])),
            Err(AlgebraError::NotPrime(9))
        ));
        assert!(matches!(
            factor(&GfPoly::zero(7)),
            Err(AlgebraError::ZeroPolynomial)
        ));
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        // (x+1)^3 (x^2+x+1)^2 over F_3 and x^4+1 = (x+1)^4 over F_2
        let p = 3;
        let a = GfPoly::from_i64(p, &[1, 1]);
        let b = GfPoly::from_i64(p, &[2, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fs = factor(&f).unwrap();
        assert_eq!(product(p, &fs), f.monic());
        assert!(fs.iter().all(|(g, _)| g.is_irreducible()));
        let g = GfPoly::from_i64(2, &[1, 0, 0, 0, 1]);
        assert_eq!(factor(&g).unwrap(), vec![(GfPoly::from_i64(2, &[1, 1]), 4)]);
    }

    #[test]
    fn large_prime_split() {
        let p = 1_000_003;
        let roots_in: Vec<u64> = vec![3, 17, 999_999, 12345, 77];
        let f = roots_in.iter().fold(GfPoly::one(p), |acc, &r| {
            acc.mul(&GfPoly::new(p, vec![p - r, 1]))
        });
        let mut r = roots(&f).unwrap();
        r.sort();
        let mut expected = roots_in.clone();
        expected.sort();
        assert_eq!(r, expected);
    }
}
