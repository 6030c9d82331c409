//! Polynomials over Z and Q with arbitrary-precision coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gfpoly::GfPoly;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyInt {
    coeffs: Vec<BigInt>,
}

/// Rational polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn write_terms<T: fmt::Display + Zero + One + PartialEq + Signed>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        let unit = abs.is_one();
        match i {
            0 => write!(f, "{abs}")?,
            1 if unit => write!(f, "x")?,
            1 => write!(f, "{abs}*x")?,
            _ if unit => write!(f, "x^{i}")?,
            _ => write!(f, "{abs}*x^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for PolyInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

impl PolyInt {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyInt { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        PolyInt::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyInt { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyInt::from_i64(&[1])
    }

    pub fn x() -> Self {
        PolyInt::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> PolyInt {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        PolyInt::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn mul(&self, other: &PolyInt) -> PolyInt {
        if self.is_zero() || other.is_zero() {
            return PolyInt::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyInt::new(out)
    }

    pub fn add(&self, other: &PolyInt) -> PolyInt {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyInt::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &PolyInt) -> PolyInt {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyInt::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> PolyInt {
        PolyInt::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> PolyInt {
        PolyInt::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Reduction modulo a prime.
    pub fn mod_p(&self, p: u64) -> GfPoly {
        let m = BigInt::from(p);
        GfPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| c.mod_floor(&m).to_u64().expect("reduced below p"))
                .collect(),
        )
    }

    /// Coefficients reduced into the symmetric range of `m`.
    pub fn symmetric_mod(&self, m: &BigInt) -> PolyInt {
        let half = m / 2;
        PolyInt::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    pub fn reduce_mod(&self, m: &BigInt) -> PolyInt {
        PolyInt::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Exact quotient over Z, if `divisor` divides `self` with integral quotient.
    pub fn exact_div(&self, divisor: &PolyInt) -> Option<PolyInt> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(PolyInt::zero());
        }
        if self.deg() < divisor.deg() {
            return None;
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (q, r) = rem[i].div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &q * b;
            }
            quot[i - dd] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(PolyInt::new(quot))
    }

    /// Euclidean norm rounded up.
    pub fn l2_norm_ceil(&self) -> BigInt {
        let sum: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        let root = sum.sqrt();
        if &root * &root == sum {
            root
        } else {
            root + 1
        }
    }

    /// Polynomial discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        if n == 0 {
            return BigInt::one();
        }
        let f = self.to_qpoly();
        let res = resultant(&f, &f.derivative()) / BigRational::from_integer(self.leading());
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        (res * rat(sign)).to_integer()
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::from_i64(&[1])
    }

    pub fn x() -> Self {
        QPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        QPoly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < divisor.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let dd = divisor.deg();
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &lead;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let t = &q * b;
                rem[i - dd + j] -= t;
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
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
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &QPoly) -> QPoly {
        self.coeffs.iter().rev().fold(QPoly::zero(), |acc, c| {
            acc.mul(inner).add(&QPoly::constant(c.clone()))
        })
    }

    /// Primitive integer polynomial with the same roots and positive leading
    /// coefficient.
    pub fn to_primitive_int(&self) -> PolyInt {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        PolyInt::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    /// Integer polynomial when every coefficient is integral.
    pub fn to_int(&self) -> Option<PolyInt> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(PolyInt::new(
                self.coeffs.iter().map(|c| c.to_integer()).collect(),
            ))
        } else {
            None
        }
    }
}

/// Resultant of two rational polynomials by the Euclidean recursion.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = BigRational::one();
    loop {
        let m = a.deg();
        let n = b.deg();
        if n == 0 {
            return acc * num_traits::pow(b.leading(), m);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return BigRational::zero();
        }
        let k = r.deg();
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.leading(), m - k);
        a = b;
        b = r;
    }
}

/// The fraction `a/b` with `|a|, b <= sqrt(m/2)` congruent to `r` mod `m`,
/// if one exists.
pub fn rational_reconstruction(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound: BigInt = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Interpolating polynomial through `(x_i, y_i)` with distinct `x_i`.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> QPoly {
    // Newton divided differences
    let n = points.len();
    let xs: Vec<BigRational> = points.iter().map(|(x, _)| x.clone()).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut out = QPoly::zero();
    for i in (0..n).rev() {
        out = out
            .mul(&QPoly::new(vec![-xs[i].clone(), BigRational::one()]))
            .add(&QPoly::constant(dd[i].clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(
            PolyInt::from_i64(&[-1, -1, 1]).discriminant(),
            BigInt::from(5)
        );
        assert_eq!(
            PolyInt::from_i64(&[1, 0, 1]).discriminant(),
            BigInt::from(-4)
        );
        assert_eq!(
            PolyInt::from_i64(&[1, 1, 1, 1, 1]).discriminant(),
            BigInt::from(125)
        );
        assert_eq!(
            PolyInt::from_i64(&[-2, 0, 0, 1]).discriminant(),
            BigInt::from(-108)
        );
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res((x-1)(x-2), x-3) = (1-3)(2-3) = 2 up to sign conventions
        let a = QPoly::from_i64(&[2, -3, 1]);
        let b = QPoly::from_i64(&[-3, 1]);
        assert_eq!(resultant(&a, &b), rat(2));
        assert!(resultant(&a, &QPoly::from_i64(&[-1, 1])).is_zero());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = QPoly::from_i64(&[3, 0, -2, 1]);
        let pts: Vec<_> = (0..4).map(|i| (rat(i), f.eval(&rat(i)))).collect();
        assert_eq!(interpolate(&pts), f);
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        let target = rat_frac(-355, 113);
        let inv = BigInt::from(113).modinv(&m).unwrap();
        let r = (BigInt::from(-355) * inv).mod_floor(&m);
        assert_eq!(rational_reconstruction(&r, &m), Some(target));
        assert_eq!(rational_reconstruction(&BigInt::from(7), &m), Some(rat(7)));
    }

    #[test]
    fn exact_division() {
        let a = PolyInt::from_i64(&[1, 1]);
        let b = PolyInt::from_i64(&[-1, 2]);
        assert_eq!(a.mul(&b).exact_div(&b), Some(a.clone()));
        assert_eq!(a.exact_div(&b), None);
        assert_eq!(
            format!("{}", PolyInt::from_i64(&[-1, -1, 1])),
            "x^2 - x - 1"
        );
    }
}
