//! Eigenform data: tables of Hecke eigenvalues, Dirichlet characters,
//! twisting, load-time validation and the shipped fixtures.

pub mod character;
pub mod eigenform;
pub mod elliptic;
pub mod fixtures;
pub mod theta;
pub mod validate;

use std::collections::BTreeMap;

pub use character::{
    enumerate_characters, enumerate_quadratic_characters, quadratic_discriminants, CharacterError,
    CharacterValues, DirichletCharacter,
};
pub use eigenform::{Eigenform, EigenformError, LocalKind, LocalType};
pub use elliptic::{ec_ap, CurveError, EllipticCurveModel};
pub use validate::{validate, ValidationReport, Violation};

use crate::algebra::NfElem;

/// Eigenvalues of `f ⊗ ε`: `a_p·ε(p)` at every stored prime, zero at
/// primes dividing the conductor of `ε`. Fails when the values of `ε` do not
/// lie in the coefficient field of `f`.
pub fn twist_eigenvalues(
    f: &Eigenform,
    eps: &DirichletCharacter,
) -> Result<BTreeMap<u64, NfElem>, CharacterError> {
    let eps = eps.primitive();
    let values = eps.values_in(&f.field)?;
    let cond = eps.modulus();
    Ok(f.ap
        .iter()
        .map(|(&p, a)| {
            let v = if cond % p == 0 {
                f.field.zero()
            } else {
                f.field.mul(a, &values.value(p as i64))
            };
            (p, v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisting_examples() {
        let f = fixtures::load("11a").unwrap();
        let same = twist_eigenvalues(&f, &DirichletCharacter::trivial(1)).unwrap();
        assert_eq!(same, f.ap);
        let minus4 = DirichletCharacter::kronecker(-4).unwrap();
        let t = twist_eigenvalues(&f, &minus4).unwrap();
        assert_eq!(t[&3], f.field.from_int(1));
        assert!(t[&2].is_zero());
        let cubic = DirichletCharacter::new(7, &[(1, 3)]).unwrap();
        assert!(matches!(
            twist_eigenvalues(&f, &cubic),
            Err(CharacterError::ValueField(3))
        ));
    }

    #[test]
    fn shipped_tables_validate() {
        for label in ["11a", "27a", "23a", "synthetic-td29"] {
            let f = fixtures::load(label).unwrap();
            let report = validate(&f);
            assert!(report.is_clean(), "{label}: {:?}", report.violations);
        }
        // random eigenvalues are not Weil numbers
        let report = validate(&fixtures::load("synthetic-nonexc").unwrap());
        assert!(report
            .violations
            .iter()
            .all(|v| v.check.starts_with("Hasse bound")));
        assert!(!report.is_clean());
        let mut f = fixtures::load("11a").unwrap();
        f.ap.insert(3, f.field.from_int(10));
        let report = validate(&f);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].check, "Hasse bound at p=3");
    }

    #[test]
    fn level11_table_agrees_with_point_counts() {
        let f = fixtures::load("11a").unwrap();
        let e = EllipticCurveModel::new([0, -1, 1, -10, -20], "11a").unwrap();
        for p in f.good_primes(1000) {
            assert_eq!(f.ap(p), Some(&f.field.from_int(ec_ap(&e, p).unwrap())));
        }
    }
}
