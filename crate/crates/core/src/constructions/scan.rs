//! Realization scans: primes `ℓ` at which a form without inner twists has
//! image `PSL_2(F_{ℓ^n})` or `PGL_2(F_{ℓ^n})`, and the density of the
//! degree-`n` slots that feed them.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::ConstructionError;
use crate::algebra::{field_automorphisms, NumberField};
use crate::galois_image::{
    classify_image, detect_inner_twists, GaloisError, ImageStatus, ReductionContext, Witness,
};
use crate::groups::{density_of_degree, FiniteGroup};
use crate::newform_data::Eigenform;
use crate::par;
use crate::primes::{prime_pi, primes_up_to};

#[derive(Clone, Debug, Serialize)]
pub struct RealizationRecord {
    pub n: usize,
    pub ell: u64,
    /// `"PSL2(F_3^2)"` and so on.
    pub group: String,
    pub label: String,
    pub slot: String,
    pub residue_degree: usize,
    pub lambda_degree: usize,
    /// Primes of `Nℓ` followed by `"∞"`.
    pub ramification: Vec<String>,
    pub certificate: Vec<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub label: String,
    pub n: usize,
    pub ell_bound: u64,
    pub sample_bound: u64,
    pub twist_field_degree: usize,
    pub records: Vec<RealizationRecord>,
    /// `(ℓ, reason)` for primes with a degree-`n` slot and no large image.
    pub unresolved: Vec<(u64, String)>,
}

/// Scan `3 <= ℓ <= ell_bound` for slots with `d_λ = n` and large image.
///
/// Refuses forms with nontrivial inner twists, where the image is only
/// determined over `K_Γ`. Primes dividing the discriminant of `F_f` are
/// skipped since their factor degrees need not be residue degrees.
pub fn realization_scan(
    f: Arc<Eigenform>,
    n: usize,
    ell_bound: u64,
    sample_bound: u64,
) -> Result<ScanReport, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InvalidQuery("n must be positive".into()));
    }
    let twists = detect_inner_twists(&f, sample_bound)?;
    if !twists.is_trivial() {
        return Err(GaloisError::TwistsPresent.into());
    }
    let ff = &twists.twist_field;
    let ells: Vec<u64> = primes_up_to(ell_bound)
        .into_iter()
        .filter(|&l| l != 2 && ff.field.dedekind_valid(l))
        .collect();
    let results = par::map(&ells, |&ell| scan_one(&f, &twists, n, ell, sample_bound));
    let mut records = Vec::new();
    let mut unresolved = Vec::new();
    for (ell, r) in ells.iter().zip(results) {
        match r? {
            Some(Ok(rec)) => records.push(rec),
            Some(Err(reason)) => unresolved.push((*ell, reason)),
            None => {}
        }
    }
    Ok(ScanReport {
        label: f.label.clone(),
        n,
        ell_bound,
        sample_bound,
        twist_field_degree: ff.degree(),
        records,
        unresolved,
    })
}

/// `None` if no slot above `ℓ` has `d_λ = n`.
fn scan_one(
    f: &Arc<Eigenform>,
    twists: &crate::galois_image::InnerTwistReport,
    n: usize,
    ell: u64,
    bound: u64,
) -> Result<Option<Result<RealizationRecord, String>>, ConstructionError> {
    let mut reasons = Vec::new();
    let contexts = match ReductionContext::all_above(f.clone(), ell) {
        Ok(c) => c,
        Err(e) => return Ok(Some(Err(e.to_string()))),
    };
    for ctx in contexts {
        let ctx = ctx.with_twist_field(&twists.twist_field)?;
        if ctx.lambda_degree() != Some(n) {
            continue;
        }
        let c = classify_image(&ctx, bound, Some(twists))?;
        let group = match c.status {
            ImageStatus::LargePSL { .. } => "PSL2",
            ImageStatus::LargePGL { .. } => "PGL2",
            other => {
                reasons.push(format!("{}: {other:?}", c.slot));
                continue;
            }
        };
        let field = if n == 1 {
            format!("F_{ell}")
        } else {
            format!("F_{ell}^{n}")
        };
        let mut ramification: Vec<String> = crate::algebra::arith::factorize(f.level * ell)
            .into_iter()
            .map(|(p, _)| p.to_string())
            .collect();
        ramification.push("∞".into());
        return Ok(Some(Ok(RealizationRecord {
            n,
            ell,
            group: format!("{group}({field})"),
            label: f.label.clone(),
            slot: c.slot,
            residue_degree: c.residue_degree,
            lambda_degree: n,
            ramification,
            certificate: c.witnesses,
        })));
    }
    Ok(if reasons.is_empty() {
        None
    } else {
        Some(Err(reasons.join("; ")))
    })
}

/// Multiplication table of `Aut(K)` when `K` is Galois over `Q`, with
/// `Automorphism::compose` as the product.
pub fn galois_group_table(k: &NumberField) -> Result<Option<FiniteGroup>, ConstructionError> {
    let auts = field_automorphisms(k)?;
    if auts.len() != k.degree() {
        return Ok(None);
    }
    let table = auts
        .iter()
        .map(|a| {
            auts.iter()
                .map(|b| {
                    let c = a.compose(k, b);
                    auts.iter().position(|x| *x == c).expect("Aut(K) is closed")
                })
                .collect()
        })
        .collect();
    Ok(Some(FiniteGroup::from_table(table)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct SlotFraction {
    pub n: usize,
    pub bound: u64,
    /// Primes with some degree-`n` prime above them.
    pub qualifying: u64,
    pub prime_count: u64,
    #[serde(serialize_with = "super::sieve::ser_rational")]
    pub empirical: BigRational,
    /// Chebotarev density, known when `K` is Galois.
    #[serde(serialize_with = "ser_opt_rational")]
    pub predicted: Option<BigRational>,
    pub ratio: Option<f64>,
}

fn ser_opt_rational<S: serde::Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Fraction of primes `ℓ <= bound` with a degree-`n` prime of `K` above
/// them. Primes dividing the polynomial discriminant never qualify.
pub fn degree_slot_fraction(
    k: &NumberField,
    n: usize,
    bound: u64,
) -> Result<SlotFraction, ConstructionError> {
    let primes = primes_up_to(bound);
    let flags = par::map(&primes, |&l| -> Result<bool, ConstructionError> {
        if !k.dedekind_valid(l) {
            return Ok(false);
        }
        Ok(k.residue_degrees(l)?.has_degree(n))
    });
    let mut qualifying = 0u64;
    for f in flags {
        qualifying += f? as u64;
    }
    let pi = prime_pi(bound);
    let empirical = BigRational::new(BigInt::from(qualifying), BigInt::from(pi.max(1)));
    let predicted = match galois_group_table(k)? {
        Some(g) => Some(density_of_degree(&g, &[g.identity()], n)?),
        None => None,
    };
    let ratio = predicted
        .as_ref()
        .filter(|p| !num_traits::Zero::is_zero(*p))
        .map(|p| (&empirical / p).to_f64().unwrap_or(f64::NAN));
    Ok(SlotFraction {
        n,
        bound,
        qualifying,
        prime_count: pi,
        empirical,
        predicted,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat_frac;
    use crate::newform_data::fixtures;

    #[test]
    fn psl_over_f_ell_squared_for_23a() {
        let f = Arc::new(fixtures::load("23a").unwrap());
        let rep = realization_scan(f.clone(), 2, 100, f.bound).unwrap();
        let ells: Vec<u64> = rep.records.iter().map(|r| r.ell).collect();
        // ℓ = 3 is inert but the mod-3 image is icosahedral: Frobenius
        // orders are {1, 3}, 2 and 5 in the A5 proportions 20:15:24
        assert_eq!(ells, [7, 13, 17, 23, 37, 43, 47, 53, 67, 73, 83, 97]);
        assert_eq!(rep.unresolved.len(), 1);
        assert_eq!(rep.unresolved[0].0, 3);
        assert!(rep.unresolved[0].1.contains("Exceptional"));
        assert!(rep.records.iter().all(|r| r.group.starts_with("PSL2")));
        assert!(rep
            .records
            .iter()
            .all(|r| r.ramification.last().unwrap() == "∞"));
        assert_eq!(rep.records[0].group, "PSL2(F_7^2)");
        // growing the bound only appends
        let small = realization_scan(f.clone(), 2, 40, f.bound).unwrap();
        let prefix: Vec<u64> = small.records.iter().map(|r| r.ell).collect();
        assert_eq!(prefix, ells[..prefix.len()]);
    }

    #[test]
    fn rational_coefficients_have_no_degree_two_slots() {
        let f = Arc::new(fixtures::load("11a").unwrap());
        let rep = realization_scan(f.clone(), 2, 60, f.bound).unwrap();
        assert!(rep.records.is_empty());
    }

    #[test]
    fn slot_fraction_for_sqrt5() {
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        let s = degree_slot_fraction(&k, 2, 100_000).unwrap();
        assert_eq!(s.predicted, Some(rat_frac(1, 2)));
        assert!((s.ratio.unwrap() - 1.0).abs() < 0.02);
        // ℓ inert in Q(√5) iff ℓ ≡ ±2 mod 5
        let direct = primes_up_to(100_000)
            .into_iter()
            .filter(|l| l % 5 == 2 || l % 5 == 3)
            .count() as u64;
        assert_eq!(s.qualifying, direct);
    }

    #[test]
    fn galois_tables() {
        let k = NumberField::from_i64(&[1, 0, 0, 0, 1]).unwrap();
        let g = galois_group_table(&k).unwrap().unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        let cubic = NumberField::from_i64(&[-2, 0, 0, 1]).unwrap();
        assert!(galois_group_table(&cubic).unwrap().is_none());
        let s = degree_slot_fraction(&cubic, 1, 1000).unwrap();
        assert!(s.predicted.is_none());
    }
}
