//! Finite fields F_{p^d} = F_p[x]/(m(x)) and quadratic algebras over them.

use std::fmt;

use super::arith::{factorize, inv_mod, is_prime};
use super::gfpoly::GfPoly;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    modulus: GfPoly,
}

/// Element of a finite field: a polynomial of degree below the field degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FfElem {
    value: GfPoly,
}

impl FfElem {
    pub fn value(&self) -> &GfPoly {
        &self.value
    }

    pub fn coeffs(&self) -> &[u64] {
        self.value.coeffs()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// The element as an integer when it lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        match self.value.coeffs() {
            [] => Some(0),
            [c] => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_prime_field() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FiniteField {
    /// Field with the given monic irreducible modulus.
    pub fn new(modulus: GfPoly) -> Result<Self, AlgebraError> {
        let p = modulus.modulus();
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if !modulus.is_irreducible() {
            return Err(AlgebraError::InvalidArgument(format!(
                "{modulus} is not irreducible mod {p}"
            )));
        }
        Ok(FiniteField {
            p,
            modulus: modulus.monic(),
        })
    }

    pub fn prime_field(p: u64) -> Result<Self, AlgebraError> {
        FiniteField::new(GfPoly::x(p))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus(&self) -> &GfPoly {
        &self.modulus
    }

    /// Field order when it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.degree() as u32)
    }

    pub fn elem(&self, value: GfPoly) -> FfElem {
        FfElem {
            value: value.rem(&self.modulus),
        }
    }

    pub fn from_u64(&self, c: u64) -> FfElem {
        self.elem(GfPoly::constant(self.p, c % self.p))
    }

    pub fn from_i64(&self, c: i64) -> FfElem {
        self.from_u64(super::arith::reduce_i64(c, self.p))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FfElem {
        self.elem(GfPoly::new(self.p, coeffs.to_vec()))
    }

    pub fn zero(&self) -> FfElem {
        FfElem {
            value: GfPoly::zero(self.p),
        }
    }

    pub fn one(&self) -> FfElem {
        self.from_u64(1)
    }

    /// Class of `x`, a root of the modulus.
    pub fn generator(&self) -> FfElem {
        self.elem(GfPoly::x(self.p))
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        FfElem {
            value: a.value.add(&b.value),
        }
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        FfElem {
            value: a.value.sub(&b.value),
        }
    }

    pub fn neg(&self, a: &FfElem) -> FfElem {
        FfElem {
            value: a.value.neg(),
        }
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        if self.degree() == 1 {
            let (x, y) = (a.value.coeff(0), b.value.coeff(0));
            return self.from_u64(super::arith::mul_mod(x, y, self.p));
        }
        FfElem {
            value: a.value.mul_mod(&b.value, &self.modulus),
        }
    }

    pub fn inv(&self, a: &FfElem) -> Option<FfElem> {
        if a.is_zero() {
            return None;
        }
        if self.degree() == 1 {
            return inv_mod(a.value.coeff(0), self.p).map(|c| self.from_u64(c));
        }
        let (g, s, _) = a.value.ext_gcd(&self.modulus);
        debug_assert!(g.is_one());
        Some(self.elem(s))
    }

    pub fn div(&self, a: &FfElem, b: &FfElem) -> Option<FfElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &FfElem, mut exp: u128) -> FfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: &FfElem, k: usize) -> FfElem {
        (0..k).fold(a.clone(), |acc, _| self.pow(&acc, self.p as u128))
    }

    /// Whether `a` lies in the subfield F_{p^e}.
    pub fn in_subfield(&self, a: &FfElem, e: usize) -> bool {
        &self.frobenius(a, e) == a
    }

    /// Quadratic residuosity for odd characteristic (zero counts as a square).
    pub fn is_square(&self, a: &FfElem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        let q = self.order().expect("field order fits in 128 bits");
        self.pow(a, (q - 1) / 2).is_one()
    }

    /// Multiplicative order of a nonzero element, when `q - 1` can be factored.
    pub fn element_order(&self, a: &FfElem) -> Option<u128> {
        if a.is_zero() {
            return None;
        }
        let n = self.order()? - 1;
        let factors = factor_prime_power_minus_one(self.p, self.degree() as u32)?;
        let mut order = n;
        for (q, _) in factors {
            let q = q as u128;
            while order % q == 0 && self.pow(a, order / q).is_one() {
                order /= q;
            }
        }
        Some(order)
    }

    /// Monic gcd of polynomials over this field (constant term first).
    pub fn poly_gcd(&self, a: &[FfElem], b: &[FfElem]) -> Vec<FfElem> {
        let trim = |mut v: Vec<FfElem>| {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        };
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let inv = self
                .inv(b.last().expect("nonzero"))
                .expect("nonzero leading");
            let db = b.len() - 1;
            while a.len() > db {
                let top = a.len() - 1;
                let q = self.mul(&a[top], &inv);
                for (j, bj) in b.iter().enumerate() {
                    let idx = top - db + j;
                    a[idx] = self.sub(&a[idx], &self.mul(&q, bj));
                }
                a = trim(a);
            }
            std::mem::swap(&mut a, &mut b);
        }
        if let Some(lead) = a.last() {
            let inv = self.inv(lead).expect("nonzero leading");
            a = a.iter().map(|c| self.mul(c, &inv)).collect();
        }
        a
    }

    /// All elements of a prime field, in order.
    pub fn prime_field_elements(&self) -> impl Iterator<Item = FfElem> + '_ {
        (0..self.p).map(|c| self.from_u64(c))
    }
}

/// Factorisation of `p^e - 1` through its cyclotomic pieces `Φ_k(p)`,
/// `k | e`; `None` if some piece exceeds 64 bits.
pub fn factor_prime_power_minus_one(p: u64, e: u32) -> Option<Vec<(u64, u32)>> {
    let mut pieces: Vec<u128> = Vec::new();
    let mut total = (p as u128).checked_pow(e)? - 1;
    for k in super::arith::divisors(e as u64) {
        let value = cyclotomic_value(p as u128, k as u32)?;
        total /= value;
        pieces.push(value);
    }
    debug_assert_eq!(total, 1);
    let mut merged: std::collections::BTreeMap<u64, u32> = std::collections::BTreeMap::new();
    for piece in pieces {
        let piece = u64::try_from(piece).ok()?;
        for (q, m) in factorize(piece) {
            *merged.entry(q).or_default() += m;
        }
    }
    Some(merged.into_iter().collect())
}

/// `Φ_k(x)` at an integer, from `x^k - 1 = prod_{d | k} Φ_d(x)`.
fn cyclotomic_value(x: u128, k: u32) -> Option<u128> {
    let mut value = x.checked_pow(k)? - 1;
    for d in super::arith::divisors(k as u64) {
        if d as u32 != k {
            value /= cyclotomic_value(x, d as u32)?;
        }
    }
    Some(value)
}

/// The algebra `F[y]/(y^2 - t*y - c)` over a finite field `F`; a field when
/// the quadratic is irreducible, `F x F` when it splits.
#[derive(Clone, Debug)]
pub struct QuadAlgebra<'a> {
    pub base: &'a FiniteField,
    /// `y^2 = t*y + c`
    pub t: FfElem,
    pub c: FfElem,
}

/// `a + b*y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: FfElem,
    pub b: FfElem,
}

impl<'a> QuadAlgebra<'a> {
    pub fn new(base: &'a FiniteField, t: FfElem, c: FfElem) -> Self {
        QuadAlgebra { base, t, c }
    }

    pub fn one(&self) -> QuadElem {
        QuadElem {
            a: self.base.one(),
            b: self.base.zero(),
        }
    }

    pub fn y(&self) -> QuadElem {
        QuadElem {
            a: self.base.zero(),
            b: self.base.one(),
        }
    }

    pub fn scalar(&self, a: FfElem) -> QuadElem {
        QuadElem {
            a,
            b: self.base.zero(),
        }
    }

    pub fn add(&self, x: &QuadElem, z: &QuadElem) -> QuadElem {
        let f = self.base;
        QuadElem {
            a: f.add(&x.a, &z.a),
            b: f.add(&x.b, &z.b),
        }
    }

    pub fn mul(&self, x: &QuadElem, z: &QuadElem) -> QuadElem {
        let f = self.base;
        // (a + b y)(a' + b' y) = aa' + bb'c + (ab' + a'b + bb't) y
        let bb = f.mul(&x.b, &z.b);
        QuadElem {
            a: f.add(&f.mul(&x.a, &z.a), &f.mul(&bb, &self.c)),
            b: f.add(
                &f.add(&f.mul(&x.a, &z.b), &f.mul(&z.a, &x.b)),
                &f.mul(&bb, &self.t),
            ),
        }
    }

    pub fn pow(&self, x: &QuadElem, mut exp: u128) -> QuadElem {
        let mut base = x.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Norm `x * conj(x)` where `conj(y) = t - y`.
    pub fn norm(&self, x: &QuadElem) -> FfElem {
        let f = self.base;
        // (a + b y)(a + b t - b y) = a^2 + ab t - b^2 c
        let a2 = f.mul(&x.a, &x.a);
        let abt = f.mul(&f.mul(&x.a, &x.b), &self.t);
        let b2c = f.mul(&f.mul(&x.b, &x.b), &self.c);
        f.sub(&f.add(&a2, &abt), &b2c)
    }

    pub fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        let f = self.base;
        let n = f.inv(&self.norm(x))?;
        let conj = QuadElem {
            a: f.add(&x.a, &f.mul(&x.b, &self.t)),
            b: f.neg(&x.b),
        };
        Some(QuadElem {
            a: f.mul(&conj.a, &n),
            b: f.mul(&conj.b, &n),
        })
    }

    /// Least `n | multiple` with `x^n = 1`, given the factorisation of `multiple`.
    pub fn order_dividing(
        &self,
        x: &QuadElem,
        multiple: u128,
        factors: &[(u64, u32)],
    ) -> Option<u128> {
        if self.pow(x, multiple) != self.one() {
            return None;
        }
        let mut order = multiple;
        for &(q, _) in factors {
            let q = q as u128;
            while order % q == 0 && self.pow(x, order / q) == self.one() {
                order /= q;
            }
        }
        Some(order)
    }
}
