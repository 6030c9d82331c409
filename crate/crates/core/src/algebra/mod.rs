//! Exact arithmetic over Z, Q, F_ℓ, F_{ℓ^d} and number fields.

pub mod arith;
pub mod cyclotomic;
pub mod finite_field;
pub mod gfpoly;
pub mod linalg;
pub mod number_field;
pub mod poly;
pub mod roots;
pub mod subfield;
pub mod zassenhaus;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: u64, m: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree cap exceeded: degree {degree} is above {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("defining polynomial {0} is not irreducible over Q")]
    NotIrreducible(String),
    #[error("defining polynomial must be monic with integer coefficients")]
    NotMonic,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("bad denominator at {0}")]
    BadDenominator(String),
    #[error("factor recombination exceeded its search budget")]
    SearchBudget,
}

pub use arith::multiplicative_order;
pub use cyclotomic::{cyclotomic_poly, real_cyclotomic_minpoly};
pub use finite_field::{FfElem, FiniteField};
pub use gfpoly::GfPoly;
pub use number_field::{NfElem, NumberField, PrimeSlot, ResidueDegrees};
pub use poly::{PolyInt, QPoly};
pub use roots::{contains_real_cyclotomic, field_automorphisms, Automorphism};
pub use subfield::{compositum, generated_subfield, Subfield};

/// Factor an integer polynomial modulo a prime into monic irreducibles.
pub fn factor_poly_mod_ell(f: &PolyInt, ell: u64) -> Result<Vec<(GfPoly, u32)>, AlgebraError> {
    if !arith::is_prime(ell) {
        return Err(AlgebraError::NotPrime(ell));
    }
    gfpoly::factor(&f.mod_p(ell))
}

/// Residue degrees of `ell` in `field`, with the Dedekind validity flag.
pub fn residue_degrees(field: &NumberField, ell: u64) -> Result<ResidueDegrees, AlgebraError> {
    if !arith::is_prime(ell) {
        return Err(AlgebraError::NotPrime(ell));
    }
    field.residue_degrees(ell)
}
