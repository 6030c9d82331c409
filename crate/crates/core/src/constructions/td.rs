//! Certificates for a declared tamely dihedral local type.

use serde::Serialize;

use super::{first_failure, verdict_of, Check, ConstructionError, Outcome, Verdict};
use crate::algebra::arith::{gcd, valuation};
use crate::algebra::contains_real_cyclotomic;
use crate::galois_image::{twist_invariant_field, verify_ordp};
use crate::newform_data::{Eigenform, LocalKind};

#[derive(Clone, Debug, Serialize)]
pub struct TdCertificate {
    pub label: String,
    pub q: u64,
    pub n: u64,
    pub checks: Vec<Check>,
    pub status: Verdict,
    /// First failing clause when refuted.
    pub reason: Option<String>,
}

/// Check that `f` can be tamely dihedral of order `n` at `q | N`.
///
/// The clauses are: `q² ∥ N`, `n > 2`, `n | q + 1`, `gcd(n, q(q−1)) = 1`,
/// `χ` unramified at `q`, `a_q` absent or zero, the declared local type, and
/// `F_f ⊇ Q(ζ_n + ζ_n^{-1})`. With no stored `a_q` and no declared type
/// there is nothing to certify against and the status is insufficient data.
pub fn td_certificate(f: &Eigenform, q: u64, n: u64) -> Result<TdCertificate, ConstructionError> {
    if q < 2 || f.level % q != 0 {
        return Err(ConstructionError::NotDividing { q, level: f.level });
    }
    let v = valuation(f.level, q);
    let g = gcd(n, q * (q - 1));
    let mut checks = vec![
        Check::from_bool("q² ∥ N", v == 2, format!("v_{q}(N) = {v}")),
        Check::from_bool("order n > 2", n > 2, format!("n = {n}")),
        Check::from_bool(
            "n | q+1",
            n != 0 && (q + 1) % n == 0,
            format!("q + 1 = {}", q + 1),
        ),
        Check::from_bool(
            "gcd(n, q(q−1)) = 1",
            g == 1,
            format!("gcd({n}, {q}·{}) = {g}", q - 1),
        ),
    ];
    let conductor = f.nebentypus.primitive().modulus();
    checks.push(Check::from_bool(
        "nebentypus unramified at q",
        conductor % q != 0,
        format!("cond(χ) = {conductor}"),
    ));
    let aq = f.ap(q);
    checks.push(match aq {
        None => Check::new("a_q absent or zero", Outcome::Pass, "a_q not stored"),
        Some(a) => Check::from_bool(
            "a_q absent or zero",
            a.is_zero(),
            format!("a_{q} = {}", f.field.format(a)),
        ),
    });
    let declared = f.local_type(q).map(|lt| lt.kind);
    checks.push(match declared {
        Some(LocalKind::TamelyDihedral { order }) => Check::from_bool(
            "declared local type",
            order == n,
            format!("tamely dihedral of order {order}"),
        ),
        Some(LocalKind::Unknown) | None if aq.is_none() => Check::new(
            "declared local type",
            Outcome::Unknown,
            "no local type declared and a_q unavailable",
        ),
        Some(LocalKind::Unknown) | None => Check::new(
            "declared local type",
            Outcome::Pass,
            "undeclared; a_q = 0 is compatible",
        ),
        Some(other) => Check::from_bool("declared local type", false, other.name()),
    });
    checks.push(twist_field_check(f, q, n, v, g, declared)?);
    let status = verdict_of(&checks);
    Ok(TdCertificate {
        label: f.label.clone(),
        q,
        n,
        reason: first_failure(&checks),
        checks,
        status,
    })
}

fn twist_field_check(
    f: &Eigenform,
    q: u64,
    n: u64,
    v: u32,
    g: u64,
    declared: Option<LocalKind>,
) -> Result<Check, ConstructionError> {
    const CLAUSE: &str = "F_f ⊇ Q(ζ_n + ζ_n^{-1})";
    if n <= 2 {
        return Ok(Check::new(CLAUSE, Outcome::Pass, "Q(ζ_n + ζ_n^{-1}) = Q"));
    }
    let declared_here = declared == Some(LocalKind::TamelyDihedral { order: n });
    let (contains, detail) = if declared_here && v == 2 && g == 1 {
        let r = verify_ordp(f, q, n)?;
        let detail = match &r.witness {
            Some(w) => format!("root {w} in F_f = Q[x]/({})", r.twist_field_poly),
            None => format!("no root in F_f = Q[x]/({})", r.twist_field_poly),
        };
        (r.contains, detail)
    } else {
        let ff = twist_invariant_field(f, f.bound)?;
        let w = contains_real_cyclotomic(&ff.field, n)?;
        let detail = format!("F_f has degree {}", ff.degree());
        (w.is_some(), detail)
    };
    Ok(Check::from_bool(CLAUSE, contains, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newform_data::fixtures;

    #[test]
    fn synthetic_fixture_is_consistent_at_29() {
        let f = fixtures::load("synthetic-td29").unwrap();
        let c = td_certificate(&f, 29, 5).unwrap();
        assert_eq!(c.status, Verdict::Consistent, "{:?}", c.checks);
        assert!(c.reason.is_none());
    }

    #[test]
    fn order_two_and_shape_failures() {
        let f = fixtures::load("synthetic-td29").unwrap();
        let c = td_certificate(&f, 29, 2).unwrap();
        assert_eq!(c.status, Verdict::Refuted);
        assert!(c.reason.unwrap().starts_with("order n > 2"));
        // 23 ∥ N
        let c = td_certificate(&f, 23, 3).unwrap();
        assert_eq!(c.status, Verdict::Refuted);
        assert!(c.reason.unwrap().starts_with("q² ∥ N"));
        assert!(td_certificate(&f, 7, 3).is_err());
    }

    #[test]
    fn non_divisor_of_q_plus_one_is_refuted() {
        let f = fixtures::load("synthetic-td29").unwrap();
        for n in 3..40 {
            let c = td_certificate(&f, 29, n).unwrap();
            if 30 % n != 0 {
                assert_eq!(c.status, Verdict::Refuted, "n={n}");
            }
        }
    }

    #[test]
    fn undeclared_type_without_aq_is_insufficient() {
        let mut f = fixtures::load("synthetic-td29").unwrap();
        f.local_types.remove(&29);
        let c = td_certificate(&f, 29, 5).unwrap();
        assert_eq!(c.status, Verdict::InsufficientData);
    }

    #[test]
    fn degree_fifteen_fixture() {
        let f = fixtures::load("synthetic-nonexc").unwrap();
        assert_eq!(
            td_certificate(&f, 97, 7).unwrap().status,
            Verdict::Consistent
        );
        assert_eq!(
            td_certificate(&f, 241, 11).unwrap().status,
            Verdict::Consistent
        );
        // Q(ζ_13)^+ has degree 6, which does not divide 15
        let c = td_certificate(&f, 97, 13).unwrap();
        assert_eq!(c.status, Verdict::Refuted);
    }
}
