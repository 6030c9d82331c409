//! Reduction of eigenvalue data modulo a prime `Λ` of the coefficient field.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::GaloisError;
use crate::algebra::arith::pow_mod;
use crate::algebra::finite_field::{factor_prime_power_minus_one, QuadAlgebra};
use crate::algebra::{gfpoly, FfElem, FiniteField, GfPoly, NfElem, PrimeSlot, Subfield};
use crate::newform_data::Eigenform;

/// Data for `λ = Λ ∩ F_f`.
#[derive(Clone, Debug)]
pub struct LambdaData {
    pub twist_field: Subfield,
    /// Irreducible factor of `F_f`'s defining polynomial mod `ℓ` that
    /// annihilates the reduced embedded generator.
    pub factor: GfPoly,
    /// Residue degree `d_λ`.
    pub degree: usize,
    /// Image in `F_Λ` of the generator of `F_f`.
    pub image: FfElem,
}

/// A form together with a prime slot `Λ` of its coefficient field and the
/// reduced eigenvalue table.
#[derive(Clone, Debug)]
pub struct ReductionContext {
    pub form: Arc<Eigenform>,
    pub slot: PrimeSlot,
    pub residue: FiniteField,
    pub lambda: Option<LambdaData>,
    abar: BTreeMap<u64, FfElem>,
}

impl ReductionContext {
    /// Reduce every stored `a_p`. Fails if some denominator is divisible by
    /// `ℓ`.
    pub fn new(form: Arc<Eigenform>, slot: PrimeSlot) -> Result<Self, GaloisError> {
        if slot.field != form.field {
            return Err(GaloisError::Precondition(
                "prime slot belongs to a different field".into(),
            ));
        }
        let residue = slot.residue_field();
        let mut abar = BTreeMap::new();
        for (&p, a) in &form.ap {
            abar.insert(p, slot.reduce(&residue, a)?);
        }
        Ok(ReductionContext {
            form,
            slot,
            residue,
            lambda: None,
            abar,
        })
    }

    /// One context per prime slot above `ell`, in canonical factor order.
    pub fn all_above(form: Arc<Eigenform>, ell: u64) -> Result<Vec<Self>, GaloisError> {
        if !crate::algebra::arith::is_prime(ell) {
            return Err(GaloisError::NotPrime(ell));
        }
        form.field
            .prime_slots(ell)?
            .into_iter()
            .map(|slot| ReductionContext::new(form.clone(), slot))
            .collect()
    }

    /// Attach `λ = Λ ∩ F_f`.
    pub fn with_twist_field(mut self, twist_field: &Subfield) -> Result<Self, GaloisError> {
        let image = self.slot.reduce(&self.residue, &twist_field.embedding)?;
        let factors = gfpoly::factor(&twist_field.field.poly().mod_p(self.ell()))?;
        let (factor, _) = factors
            .into_iter()
            .find(|(h, _)| eval_gf_poly(&self.residue, h, &image).is_zero())
            .ok_or_else(|| {
                GaloisError::Precondition("no factor of F_f's polynomial vanishes at Λ".into())
            })?;
        self.lambda = Some(LambdaData {
            twist_field: twist_field.clone(),
            degree: factor.deg(),
            factor,
            image,
        });
        Ok(self)
    }

    pub fn ell(&self) -> u64 {
        self.slot.ell
    }

    /// Residue degree `d` of `Λ`.
    pub fn degree(&self) -> usize {
        self.residue.degree()
    }

    /// `d_λ` when `F_f` has been attached.
    pub fn lambda_degree(&self) -> Option<usize> {
        self.lambda.as_ref().map(|l| l.degree)
    }

    /// `ā_p`, if `a_p` is stored.
    pub fn abar(&self, p: u64) -> Option<&FfElem> {
        self.abar.get(&p)
    }

    /// `χ̄(p)` in `F_Λ`.
    pub fn chi_bar(&self, p: u64) -> Result<FfElem, GaloisError> {
        Ok(self.slot.reduce(&self.residue, &self.form.chi(p))?)
    }

    /// `det ρ̄(Frob_p) = χ̄(p)·p^{k−1}`.
    pub fn det_bar(&self, p: u64) -> Result<FfElem, GaloisError> {
        let ell = self.ell();
        let pk = pow_mod(p % ell, (self.form.weight - 1) as u64, ell);
        Ok(self
            .residue
            .mul(&self.chi_bar(p)?, &self.residue.from_u64(pk)))
    }

    /// Good primes `p < bound` with `p ∤ Nℓ`.
    pub fn good_primes(&self, bound: u64) -> Vec<u64> {
        let ell = self.ell();
        self.form
            .good_primes(bound.saturating_sub(1))
            .into_iter()
            .filter(|&p| p != ell)
            .collect()
    }

    pub fn describe(&self) -> String {
        format!(
            "{} at Λ = {} (F_{}^{})",
            self.form.label,
            self.slot.describe(),
            self.ell(),
            self.degree()
        )
    }
}

/// Value of a polynomial over F_ℓ at an element of an extension field.
pub fn eval_gf_poly(field: &FiniteField, h: &GfPoly, x: &FfElem) -> FfElem {
    h.coeffs().iter().rev().fold(field.zero(), |acc, &c| {
        field.add(&field.mul(&acc, x), &field.from_u64(c))
    })
}

/// Reduce an element of `Q_f` modulo `Λ`.
pub fn reduce_mod_lambda(ctx: &ReductionContext, a: &NfElem) -> Result<FfElem, GaloisError> {
    Ok(ctx.slot.reduce(&ctx.residue, a)?)
}

/// `ū(p) = ā_p² / (χ̄(p)·p^{k−1})`.
pub fn u_invariant(ctx: &ReductionContext, p: u64) -> Result<FfElem, GaloisError> {
    if ctx.form.level % p == 0 || p == ctx.ell() {
        return Err(GaloisError::BadPrime {
            p,
            reason: format!("divides Nℓ = {}·{}", ctx.form.level, ctx.ell()),
        });
    }
    let a = ctx.abar(p).ok_or(GaloisError::MissingCoefficient(p))?;
    let det = ctx.det_bar(p)?;
    let f = &ctx.residue;
    f.div(&f.mul(a, a), &det)
        .ok_or_else(|| GaloisError::Precondition(format!("det ρ̄(Frob_{p}) vanishes")))
}

/// Order in `PGL₂` of a semisimple element with `tr²/det = u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProjectiveOrder {
    Exact {
        order: u128,
    },
    /// `u = 4`: scalar (order 1) or, if not semisimple, unipotent of order `ℓ`.
    ScalarOrUnipotent {
        ell: u64,
    },
    /// No power up to the fifth is trivial; the exact order was not
    /// computed because `ℓ^{2d} − 1` is out of reach.
    AboveFive,
}

impl ProjectiveOrder {
    /// Whether every element with this descriptor has order at most 5
    /// (the unipotent case counts when `ℓ <= 5`).
    pub fn at_most_five(&self) -> bool {
        match *self {
            ProjectiveOrder::Exact { order } => order <= 5,
            ProjectiveOrder::ScalarOrUnipotent { ell } => ell <= 5,
            ProjectiveOrder::AboveFive => false,
        }
    }

    pub fn exact(&self) -> Option<u128> {
        match *self {
            ProjectiveOrder::Exact { order } => Some(order),
            _ => None,
        }
    }
}

impl fmt::Display for ProjectiveOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveOrder::Exact { order } => write!(f, "{order}"),
            ProjectiveOrder::ScalarOrUnipotent { ell } => write!(f, "{{1, {ell}}}"),
            ProjectiveOrder::AboveFive => write!(f, ">5"),
        }
    }
}

/// The eigenvalue ratio `r` satisfies `r + 1/r = u − 2`; its order is
/// computed in `F[y]/(y² − (u−2)y + 1)`, which is `F_{q²}` or `F × F`.
pub fn projective_order_from_u(field: &FiniteField, u: &FfElem) -> ProjectiveOrder {
    let ell = field.characteristic();
    let four = field.from_u64(4);
    if *u == four {
        return ProjectiveOrder::ScalarOrUnipotent { ell };
    }
    if u.is_zero() {
        return ProjectiveOrder::Exact { order: 2 };
    }
    let t = field.sub(u, &field.from_u64(2));
    let alg = QuadAlgebra::new(field, t, field.neg(&field.one()));
    let e = 2 * field.degree() as u32;
    let exact = (ell as u128).checked_pow(e).and_then(|q2| {
        let factors = factor_prime_power_minus_one(ell, e)?;
        alg.order_dividing(&alg.y(), q2 - 1, &factors)
    });
    if let Some(order) = exact {
        return ProjectiveOrder::Exact { order };
    }
    let y = alg.y();
    let mut power = y.clone();
    for k in 1..=5u128 {
        if power == alg.one() {
            return ProjectiveOrder::Exact { order: k };
        }
        power = alg.mul(&power, &y);
    }
    ProjectiveOrder::AboveFive
}

/// Whether `ℓ` is small for the big-image statement: `ℓ <= k + 1` or `ℓ`
/// divides `N` or the polynomial discriminant of `Q_f`.
pub fn is_small_prime(form: &Eigenform, ell: u64) -> bool {
    ell <= form.weight as u64 + 1 || form.level % ell == 0 || !form.field.dedekind_valid(ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NumberField;
    use crate::newform_data::fixtures;

    fn ctx(label: &str, ell: u64, slot: usize) -> ReductionContext {
        let f = Arc::new(fixtures::load(label).unwrap());
        ReductionContext::all_above(f, ell).unwrap().remove(slot)
    }

    #[test]
    fn reduction_examples() {
        let c = ctx("11a", 5, 0);
        let half = c
            .form
            .field
            .from_rational(crate::algebra::poly::rat_frac(3, 2));
        assert_eq!(
            reduce_mod_lambda(&c, &half).unwrap().as_prime_field(),
            Some(4)
        );
        let fifth = c
            .form
            .field
            .from_rational(crate::algebra::poly::rat_frac(1, 5));
        assert!(reduce_mod_lambda(&c, &fifth).is_err());

        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        let slots = k.prime_slots(11).unwrap();
        let s4 = slots.iter().find(|s| s.factor.coeffs() == [7, 1]).unwrap();
        let x = s4.reduce(&s4.residue_field(), &k.generator()).unwrap();
        assert_eq!(x.as_prime_field(), Some(4));
        let s13 = &k.prime_slots(13).unwrap()[0];
        assert_eq!(s13.degree, 2);
        let f169 = s13.residue_field();
        assert_eq!(s13.reduce(&f169, &k.generator()).unwrap(), f169.generator());
    }

    #[test]
    fn u_invariant_examples() {
        let c = ctx("11a", 7, 0);
        assert_eq!(u_invariant(&c, 3).unwrap().as_prime_field(), Some(5));
        assert_eq!(u_invariant(&c, 2).unwrap().as_prime_field(), Some(2));
        assert!(u_invariant(&c, 11).is_err());
        assert!(u_invariant(&c, 7).is_err());
    }

    #[test]
    fn projective_order_examples() {
        let f7 = FiniteField::prime_field(7).unwrap();
        let order = |u: u64| projective_order_from_u(&f7, &f7.from_u64(u));
        assert_eq!(order(0), ProjectiveOrder::Exact { order: 2 });
        assert_eq!(order(1), ProjectiveOrder::Exact { order: 3 });
        assert_eq!(order(2), ProjectiveOrder::Exact { order: 4 });
        assert_eq!(order(4), ProjectiveOrder::ScalarOrUnipotent { ell: 7 });
        assert_eq!(order(5), ProjectiveOrder::Exact { order: 8 });
        // u² − 3u + 1 splits mod 11
        let f11 = FiniteField::prime_field(11).unwrap();
        for u in 0..11u64 {
            if (u * u + 8 * u + 1) % 11 == 0 {
                assert_eq!(
                    projective_order_from_u(&f11, &f11.from_u64(u)),
                    ProjectiveOrder::Exact { order: 5 }
                );
            }
        }
    }
}
