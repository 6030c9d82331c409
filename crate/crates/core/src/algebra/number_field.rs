//! Number fields Q[x]/(m(x)) in the power basis, prime slots above a
//! rational prime and reduction onto their residue fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::finite_field::{FfElem, FiniteField};
use super::gfpoly::{self, GfPoly};
use super::linalg;
use super::poly::{resultant, PolyInt, QPoly};
use super::zassenhaus;
use super::AlgebraError;

/// `Q[x]/(m(x))` with `m` monic, integral and irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    poly: PolyInt,
    qpoly: QPoly,
    disc: BigInt,
}

/// Element in power-basis coordinates; always `degree` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElem {
    coords: Vec<BigRational>,
}

impl NfElem {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The element as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qpoly())
    }
}

impl NumberField {
    /// Build a field, certifying irreducibility of `poly` by factorisation.
    pub fn new(poly: PolyInt) -> Result<Self, AlgebraError> {
        let field = NumberField::new_unchecked(poly)?;
        if !zassenhaus::is_irreducible_over_q(&field.qpoly)? {
            return Err(AlgebraError::NotIrreducible(field.poly.to_string()));
        }
        Ok(field)
    }

    /// Build a field from a polynomial already known to be irreducible.
    pub fn new_unchecked(poly: PolyInt) -> Result<Self, AlgebraError> {
        if poly.deg() == 0 || !poly.is_monic() {
            return Err(AlgebraError::NotMonic);
        }
        let disc = poly.discriminant();
        Ok(NumberField {
            qpoly: poly.to_qpoly(),
            poly,
            disc,
        })
    }

    /// Q itself, presented as Q[x]/(x).
    pub fn rationals() -> Self {
        NumberField::new_unchecked(PolyInt::x()).expect("x is monic")
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, AlgebraError> {
        NumberField::new(PolyInt::from_i64(coeffs))
    }

    pub fn poly(&self) -> &PolyInt {
        &self.poly
    }

    pub fn qpoly(&self) -> &QPoly {
        &self.qpoly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rational_field(&self) -> bool {
        self.degree() == 1
    }

    pub fn from_qpoly(&self, p: &QPoly) -> NfElem {
        let r = p.rem(&self.qpoly);
        let n = self.degree();
        NfElem {
            coords: (0..n).map(|i| r.coeff(i)).collect(),
        }
    }

    pub fn from_coords(&self, coords: Vec<BigRational>) -> Result<NfElem, AlgebraError> {
        if coords.len() != self.degree() {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(NfElem { coords })
    }

    pub fn from_rational(&self, c: BigRational) -> NfElem {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = c;
        NfElem { coords }
    }

    pub fn from_int(&self, c: i64) -> NfElem {
        self.from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn zero(&self) -> NfElem {
        self.from_int(0)
    }

    pub fn one(&self) -> NfElem {
        self.from_int(1)
    }

    /// The class of `x`.
    pub fn generator(&self) -> NfElem {
        self.from_qpoly(&QPoly::x())
    }

    pub fn contains(&self, a: &NfElem) -> bool {
        a.coords.len() == self.degree()
    }

    pub fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &NfElem) -> NfElem {
        NfElem {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, a: &NfElem, c: &BigRational) -> NfElem {
        NfElem {
            coords: a.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        if self.degree() == 1 {
            return NfElem {
                coords: vec![&a.coords[0] * &b.coords[0]],
            };
        }
        self.from_qpoly(&a.to_qpoly().mul(&b.to_qpoly()))
    }

    pub fn inv(&self, a: &NfElem) -> Result<NfElem, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.degree() == 1 {
            return Ok(NfElem {
                coords: vec![a.coords[0].recip()],
            });
        }
        let (g, s, _) = a.to_qpoly().ext_gcd(&self.qpoly);
        debug_assert!(g.is_one());
        Ok(self.from_qpoly(&s))
    }

    pub fn div(&self, a: &NfElem, b: &NfElem) -> Result<NfElem, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &NfElem, e: u32) -> NfElem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// `g(a)` for a rational polynomial `g`.
    pub fn eval_poly(&self, g: &QPoly, a: &NfElem) -> NfElem {
        g.coeffs().iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, a), &self.from_rational(c.clone()))
        })
    }

    /// Field norm to Q.
    pub fn norm(&self, a: &NfElem) -> BigRational {
        resultant(&self.qpoly, &a.to_qpoly())
    }

    /// Monic minimal polynomial over Q: the first power of `a` dependent on
    /// the lower ones, read off one row reduction of the Krylov matrix.
    pub fn minpoly(&self, a: &NfElem) -> QPoly {
        let n = self.degree();
        let mut powers = vec![self.one()];
        for _ in 0..n {
            let next = self.mul(powers.last().expect("nonempty"), a);
            powers.push(next);
        }
        let mut matrix: linalg::Matrix = (0..n)
            .map(|i| powers.iter().map(|v| v.coords[i].clone()).collect())
            .collect();
        let pivots = linalg::rref(&mut matrix);
        let d = (0..=n)
            .find(|j| pivots.get(*j) != Some(j))
            .expect("n + 1 vectors in dimension n are dependent");
        let mut coeffs: Vec<BigRational> = (0..d).map(|i| -matrix[i][d].clone()).collect();
        coeffs.push(BigRational::one());
        QPoly::new(coeffs)
    }

    pub fn format(&self, a: &NfElem) -> String {
        a.to_string()
    }

    /// Residue degrees of the prime `ell` read off the factorisation of
    /// the defining polynomial mod `ell`.
    pub fn residue_degrees(&self, ell: u64) -> Result<ResidueDegrees, AlgebraError> {
        let slots = self.prime_slots(ell)?;
        let dedekind_valid = self.dedekind_valid(ell);
        let warning = (!dedekind_valid).then(|| {
            format!(
                "{ell} divides the polynomial discriminant {}; factor degrees need not be residue degrees",
                self.disc
            )
        });
        Ok(ResidueDegrees {
            ell,
            degrees: slots.iter().map(|s| (s.degree, s.multiplicity)).collect(),
            dedekind_valid,
            warning,
        })
    }

    pub fn dedekind_valid(&self, ell: u64) -> bool {
        !(&self.disc % BigInt::from(ell)).is_zero()
    }

    /// One slot per irreducible factor of the defining polynomial mod `ell`.
    pub fn prime_slots(&self, ell: u64) -> Result<Vec<PrimeSlot>, AlgebraError> {
        let dedekind_valid = self.dedekind_valid(ell);
        Ok(gfpoly::factor(&self.poly.mod_p(ell))?
            .into_iter()
            .map(|(factor, multiplicity)| PrimeSlot {
                field: self.clone(),
                ell,
                degree: factor.deg(),
                factor,
                multiplicity,
                dedekind_valid,
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDegrees {
    pub ell: u64,
    /// `(degree, multiplicity)` per irreducible factor, canonically ordered.
    pub degrees: Vec<(usize, u32)>,
    pub dedekind_valid: bool,
    pub warning: Option<String>,
}

impl ResidueDegrees {
    pub fn total(&self) -> usize {
        self.degrees.iter().map(|&(d, m)| d * m as usize).sum()
    }

    pub fn has_degree(&self, n: usize) -> bool {
        self.degrees.iter().any(|&(d, _)| d == n)
    }
}

/// A prime of the field above `ell`, named by an irreducible factor of the
/// defining polynomial mod `ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSlot {
    pub field: NumberField,
    pub ell: u64,
    pub factor: GfPoly,
    pub degree: usize,
    pub multiplicity: u32,
    pub dedekind_valid: bool,
}

impl PrimeSlot {
    pub fn residue_field(&self) -> FiniteField {
        FiniteField::new(self.factor.clone()).expect("slot factor is irreducible")
    }

    /// Image of `a` in the residue field; the generator maps to the class
    /// of `x` modulo the slot factor.
    pub fn reduce(&self, residue: &FiniteField, a: &NfElem) -> Result<FfElem, AlgebraError> {
        let ell = BigInt::from(self.ell);
        let mut coeffs = Vec::with_capacity(a.coords.len());
        for c in &a.coords {
            let den = c.denom().mod_floor(&ell);
            if den.is_zero() {
                return Err(AlgebraError::BadDenominator(self.describe()));
            }
            let den = den.to_u64().expect("reduced");
            let num = c.numer().mod_floor(&ell).to_u64().expect("reduced");
            let inv = super::arith::inv_mod(den, self.ell).expect("nonzero mod prime");
            coeffs.push(super::arith::mul_mod(num, inv, self.ell));
        }
        Ok(residue.elem(GfPoly::new(self.ell, coeffs)))
    }

    pub fn describe(&self) -> String {
        format!("({}, {})", self.ell, self.factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{rat, rat_frac};

    #[test]
    fn golden_ratio_field() {
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        assert_eq!(k.discriminant(), &BigInt::from(5));
        let x = k.generator();
        let x2 = k.mul(&x, &x);
        assert_eq!(x2, k.add(&x, &k.one()));
        let inv = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &inv), k.one());
        assert_eq!(k.norm(&x), rat(-1));
        assert_eq!(k.minpoly(&x), QPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(k.minpoly(&k.from_int(3)), QPoly::from_i64(&[-3, 1]));
    }

    #[test]
    fn residue_degree_examples() {
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        assert_eq!(k.residue_degrees(11).unwrap().degrees, vec![(1, 1), (1, 1)]);
        assert_eq!(k.residue_degrees(13).unwrap().degrees, vec![(2, 1)]);
        let r5 = k.residue_degrees(5).unwrap();
        assert!(!r5.dedekind_valid);
        assert!(r5.warning.is_some());
        let phi5 = NumberField::from_i64(&[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(phi5.residue_degrees(2).unwrap().degrees, vec![(4, 1)]);
    }

    #[test]
    fn reduction_examples() {
        let q = NumberField::rationals();
        let slot = &q.prime_slots(5).unwrap()[0];
        let f = slot.residue_field();
        let r = slot.reduce(&f, &q.from_rational(rat_frac(3, 2))).unwrap();
        assert_eq!(r.as_prime_field(), Some(4));
        assert!(matches!(
            slot.reduce(&f, &q.from_rational(rat_frac(1, 5))),
            Err(AlgebraError::BadDenominator(_))
        ));
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        let slots = k.prime_slots(11).unwrap();
        let lam = slots.iter().find(|s| s.factor.coeff(0) == 7).unwrap();
        let f = lam.residue_field();
        assert_eq!(
            lam.reduce(&f, &k.generator()).unwrap().as_prime_field(),
            Some(4)
        );
    }

    #[test]
    fn reducible_polynomial_rejected() {
        assert!(matches!(
            NumberField::from_i64(&[-1, 0, 1]),
            Err(AlgebraError::NotIrreducible(_))
        ));
        assert!(matches!(
            NumberField::from_i64(&[1, 2]),
            Err(AlgebraError::NotMonic)
        ));
    }
}
