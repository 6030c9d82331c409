//! CM and inner-twist detection, the twist invariant field `F_f`, `K_Γ`,
//! and the local checks that rule twists out.

use serde::Serialize;

use super::GaloisError;
use crate::algebra::arith::{gcd, is_prime, valuation};
use crate::algebra::roots::roots_in_field;
use crate::algebra::{
    compositum, contains_real_cyclotomic, field_automorphisms, generated_subfield, AlgebraError,
    Automorphism, NfElem, NumberField, PolyInt, QPoly, Subfield,
};
use crate::newform_data::character::{
    enumerate_characters, enumerate_quadratic_characters, quadratic_discriminants,
};
use crate::newform_data::{DirichletCharacter, Eigenform, LocalKind};
use crate::par;

/// Why a prime `q | N` can or cannot ramify in an inner twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleTrace {
    pub q: u64,
    pub rule: String,
    pub passed: bool,
    pub reason: String,
}

/// Apply the unramifiedness rules at a prime `q | N`.
pub fn unramified_rule(f: &Eigenform, q: u64) -> RuleTrace {
    let v = valuation(f.level, q);
    let trace = |rule: &str, passed: bool, reason: String| RuleTrace {
        q,
        rule: rule.to_string(),
        passed,
        reason,
    };
    let chi_unramified_at_q = f.nebentypus.primitive().modulus() % q != 0;
    if v == 1 {
        return if chi_unramified_at_q {
            trace(
                "squarefree-level",
                true,
                format!("{q} ∥ N and χ is unramified at {q}"),
            )
        } else {
            trace("squarefree-level", false, format!("χ is ramified at {q}"))
        };
    }
    match f.local_type(q).map(|lt| lt.kind) {
        Some(LocalKind::TamelyDihedral { order }) => {
            let g = gcd(order, q * (q - 1));
            if v == 2 && order >= 3 && g == 1 {
                trace(
                    "tamely-dihedral",
                    true,
                    format!("{q}² ∥ N, order {order}, gcd({order}, {q}·{}) = 1", q - 1),
                )
            } else if order < 3 {
                trace("tamely-dihedral", false, format!("order {order} below 3"))
            } else {
                trace(
                    "tamely-dihedral",
                    false,
                    format!("gcd({order}, {q}·{}) = {g}", q - 1),
                )
            }
        }
        Some(LocalKind::RamifiedPrincipalSeries { order: Some(n) })
            if f.nebentypus.is_trivial() && n % 2 == 1 =>
        {
            trace(
                "odd-order-principal-series",
                true,
                format!("upper triangular type of odd order {n} with trivial χ"),
            )
        }
        Some(LocalKind::Unknown) | None => trace("none", false, "unknown local type".to_string()),
        Some(kind) => trace(
            "none",
            false,
            format!("{} type admits no rule", kind.name()),
        ),
    }
}

/// Primes allowed in the conductor of an inner twist: 2 and every `q | N`
/// not excluded by [`unramified_rule`].
pub fn twist_support(f: &Eigenform) -> Vec<u64> {
    let mut support = vec![2];
    for (q, _) in f.level_factorization() {
        if q != 2 && !unramified_rule(f, q).passed {
            support.push(q);
        }
    }
    support
}

/// A character `ε` with `a_p ε(p) = a_p` on the sample.
#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    /// Fundamental discriminant of the CM character, if one survives.
    pub discriminant: Option<i64>,
    #[serde(skip)]
    pub character: Option<DirichletCharacter>,
    /// `(discriminant, p)`: a prime with `ε(p) = −1` and `a_p ≠ 0`.
    pub refuted: Vec<(i64, u64)>,
    pub support: Vec<u64>,
    pub verified_bound: u64,
}

fn check_bound(f: &Eigenform, bound: u64) -> Result<(), GaloisError> {
    if bound > f.bound {
        Err(GaloisError::SampleBound {
            requested: bound,
            available: f.bound,
        })
    } else {
        Ok(())
    }
}

/// First prime `p < bound` with `p ∤ N·cond ε`, `ε(p) = −1` and `a_p ≠ 0`.
fn cm_refutation(f: &Eigenform, eps: &DirichletCharacter, bound: u64) -> Option<u64> {
    let cond = eps.modulus();
    f.good_primes(bound.saturating_sub(1))
        .into_iter()
        .filter(|&p| cond % p != 0)
        .find(|&p| eps.quadratic_value(p as i64) == -1 && !f.ap[&p].is_zero())
}

/// Search for a quadratic `ε` with `a_p = 0` whenever `ε(p) = −1`, `p < bound`.
pub fn detect_cm(f: &Eigenform, bound: u64) -> Result<CmReport, GaloisError> {
    check_bound(f, bound)?;
    let support = twist_support(f);
    let candidates = enumerate_quadratic_characters(&support, false)?;
    let outcomes = par::map(&candidates, |eps| cm_refutation(f, eps, bound));
    let mut report = CmReport {
        discriminant: None,
        character: None,
        refuted: Vec::new(),
        support,
        verified_bound: bound,
    };
    for (eps, outcome) in candidates.into_iter().zip(outcomes) {
        let d = eps.fundamental_discriminant().expect("quadratic");
        match outcome {
            Some(p) => report.refuted.push((d, p)),
            None if report.discriminant.is_none() => {
                report.discriminant = Some(d);
                report.character = Some(eps);
            }
            None => {}
        }
    }
    Ok(report)
}

/// `(ε, σ)` with `a_p ε(p) = σ(a_p)` on the sample.
#[derive(Clone, Debug)]
pub struct TwistPair {
    pub epsilon: DirichletCharacter,
    pub sigma: Automorphism,
    /// Position of `σ` in [`field_automorphisms`] order.
    pub sigma_index: usize,
    pub verified_bound: u64,
}

#[derive(Clone, Debug)]
pub struct InnerTwistReport {
    pub pairs: Vec<TwistPair>,
    /// Distinct `σ` occurring in `pairs`, identity first.
    pub gamma: Vec<Automorphism>,
    /// `F_f` with its embedding into `Q_f`.
    pub twist_field: Subfield,
    /// Compositum of the quadratic fields cut out by the `ε`; `None` when
    /// some `ε` is not quadratic.
    pub k_gamma: Option<NumberField>,
    pub cm_discriminant: Option<i64>,
    pub support: Vec<u64>,
    pub bound: u64,
    /// False when a cap stopped the candidate enumeration.
    pub complete: bool,
    pub notes: Vec<String>,
}

impl InnerTwistReport {
    /// Only the trivial pair `(1, id)` was found.
    pub fn is_trivial(&self) -> bool {
        self.pairs.iter().all(|p| p.epsilon.is_trivial())
    }

    pub fn nontrivial_pairs(&self) -> impl Iterator<Item = &TwistPair> {
        self.pairs.iter().filter(|p| !p.epsilon.is_trivial())
    }
}

const CHARACTER_ENUMERATION_CAP: u64 = 10_000;

fn twist_candidates(f: &Eigenform, support: &[u64]) -> (Vec<DirichletCharacter>, Vec<String>) {
    let mut notes = Vec::new();
    let mut candidates = Vec::new();
    for d in quadratic_discriminants(support, true) {
        match DirichletCharacter::kronecker(d) {
            Ok(eps) => candidates.push(eps),
            Err(_) => notes.push(format!("ε of discriminant {d} exceeds the modulus cap")),
        }
    }
    if !f.nebentypus.is_real() {
        // conductor exponents bounded by the level (at least 3 at 2)
        let mut m = 1u64;
        for &q in support {
            let e = valuation(f.level, q).max(if q == 2 { 3 } else { 1 });
            m = m.saturating_mul(q.saturating_pow(e));
        }
        match enumerate_characters(m, CHARACTER_ENUMERATION_CAP) {
            Ok(all) => {
                for chi in all {
                    if !chi.is_real() {
                        candidates.push(chi.primitive());
                    }
                }
            }
            Err(_) => notes.push(format!(
                "characters mod {m} exceed the enumeration cap; only quadratic ε tried"
            )),
        }
    }
    (candidates, notes)
}

fn twist_holds(
    f: &Eigenform,
    eps: &DirichletCharacter,
    sigma: &Automorphism,
    bound: u64,
) -> Result<bool, GaloisError> {
    let values = match eps.values_in(&f.field) {
        Ok(v) => v,
        Err(_) => return Ok(false),
    };
    let cond = eps.modulus();
    for p in f.good_primes(bound.saturating_sub(1)) {
        if cond % p == 0 {
            continue;
        }
        let a = &f.ap[&p];
        let lhs = f.field.mul(a, &values.value(p as i64));
        if lhs != sigma.apply(&f.field, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The subfield of `Q_f` generated by `a_p²/χ(p)` for good `p < bound`.
pub fn twist_invariant_field(f: &Eigenform, bound: u64) -> Result<Subfield, GaloisError> {
    let k = &f.field;
    let mut gens: Vec<NfElem> = Vec::new();
    for p in f.good_primes(bound.saturating_sub(1)) {
        let a = &f.ap[&p];
        let g = k.div(&k.mul(a, a), &f.chi(p))?;
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    if gens.is_empty() {
        gens.push(k.one());
    }
    let sub = generated_subfield(k, &gens)?;
    if sub.degree() == k.degree() {
        return Ok(Subfield {
            field: k.clone(),
            embedding: k.generator(),
        });
    }
    Ok(sub)
}

/// Inner twists `(ε, σ)` verified for `p < bound`, with `Γ`, `F_f` and `K_Γ`.
pub fn detect_inner_twists(f: &Eigenform, bound: u64) -> Result<InnerTwistReport, GaloisError> {
    check_bound(f, bound)?;
    let support = twist_support(f);
    let (candidates, mut notes) = twist_candidates(f, &support);
    let mut complete = notes.is_empty();
    let twist_field = twist_invariant_field(f, bound)?;
    // With χ real every candidate ε is quadratic, so a verified pair has
    // σ(a_p²/χ(p)) = a_p²/χ(p) on the sample: σ fixes F_f.
    let fixes_twist_field = f.nebentypus.is_real();
    let automorphisms: Vec<(usize, Automorphism)> = if fixes_twist_field
        && twist_field.degree() == f.field.degree()
    {
        vec![(0, Automorphism::identity(&f.field))]
    } else {
        match field_automorphisms(&f.field) {
            Ok(all) => all
                .into_iter()
                .enumerate()
                .filter(|(_, s)| {
                    !fixes_twist_field
                        || s.apply(&f.field, &twist_field.embedding) == twist_field.embedding
                })
                .collect(),
            Err(AlgebraError::DegreeCap { degree, cap }) => {
                notes.push(format!(
                        "automorphisms of a degree-{degree} field exceed the cap {cap}; only σ = id tried"
                    ));
                complete = false;
                vec![(0, Automorphism::identity(&f.field))]
            }
            Err(e) => return Err(e.into()),
        }
    };
    let jobs: Vec<(usize, usize)> = (0..automorphisms.len())
        .flat_map(|s| (0..candidates.len()).map(move |c| (s, c)))
        .collect();
    let results = par::map(&jobs, |&(s, c)| {
        twist_holds(f, &candidates[c], &automorphisms[s].1, bound)
    });
    let mut pairs = Vec::new();
    for (&(s, c), ok) in jobs.iter().zip(results) {
        if ok? {
            let (index, sigma) = &automorphisms[s];
            pairs.push(TwistPair {
                epsilon: candidates[c].clone(),
                sigma: sigma.clone(),
                sigma_index: *index,
                verified_bound: bound,
            });
        }
    }
    pairs.sort_by_key(|p| (p.sigma_index, p.epsilon.modulus()));
    let mut gamma: Vec<Automorphism> = Vec::new();
    for p in &pairs {
        if !gamma.contains(&p.sigma) {
            gamma.push(p.sigma.clone());
        }
    }
    let cm_discriminant = pairs
        .iter()
        .find(|p| p.sigma_index == 0 && !p.epsilon.is_trivial())
        .and_then(|p| p.epsilon.fundamental_discriminant());
    let discriminants: Option<Vec<i64>> = pairs
        .iter()
        .filter(|p| !p.epsilon.is_trivial())
        .map(|p| p.epsilon.fundamental_discriminant())
        .collect();
    let k_gamma = match discriminants {
        Some(ds) => Some(quadratic_compositum(&ds)?),
        None => {
            notes.push("some ε is not quadratic; K_Γ not computed".into());
            None
        }
    };
    Ok(InnerTwistReport {
        pairs,
        gamma,
        twist_field,
        k_gamma,
        cm_discriminant,
        support,
        bound,
        complete,
        notes,
    })
}

/// `Q(√d_1, …, √d_r)` as a simple extension, built one square root at a
/// time with primitive elements `θ + c√d`.
pub fn quadratic_compositum(discriminants: &[i64]) -> Result<NumberField, GaloisError> {
    let mut k = NumberField::rationals();
    for &d in discriminants {
        let x2_minus_d = QPoly::from_i64(&[-d, 0, 1]);
        if k.degree() == 1 {
            if !roots_in_field(&k, &x2_minus_d)?.is_empty() {
                continue;
            }
            k = NumberField::new(PolyInt::from_i64(&[-d, 0, 1]))?;
            continue;
        }
        if !roots_in_field(&k, &x2_minus_d)?.is_empty() {
            continue;
        }
        let h = compositum(k.poly(), &PolyInt::from_i64(&[-d, 0, 1]))?;
        k = NumberField::new(h)?;
    }
    Ok(k)
}

/// Outcome of the no-inner-twist checklist (trivial nebentypus only).
#[derive(Clone, Debug, Serialize)]
pub struct NoitReport {
    pub passes: bool,
    pub trace: Vec<RuleTrace>,
}

/// Every `q | N` must pass one unramifiedness rule; then `f` has no
/// nontrivial inner twists and no CM.
pub fn noit_checklist(f: &Eigenform) -> Result<NoitReport, GaloisError> {
    if !f.nebentypus.is_trivial() {
        return Err(GaloisError::Precondition(
            "the checklist applies to trivial nebentypus".into(),
        ));
    }
    let trace: Vec<RuleTrace> = f
        .level_factorization()
        .into_iter()
        .map(|(q, _)| unramified_rule(f, q))
        .collect();
    Ok(NoitReport {
        passes: trace.iter().all(|t| t.passed),
        trace,
    })
}

/// `⌈r/2 − 1 − 1/(p−1)⌉`, floored at 0, with the exact value.
pub fn brumer_exponent(p: u64, r: u64) -> Result<(u64, num_rational::BigRational), GaloisError> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    if !is_prime(p) {
        return Err(GaloisError::NotPrime(p));
    }
    if r == 0 {
        return Err(GaloisError::Precondition("r must be positive".into()));
    }
    let value = BigRational::new(BigInt::from(r), BigInt::from(2))
        - BigRational::from_integer(BigInt::from(1))
        - BigRational::new(BigInt::from(1), BigInt::from(p - 1));
    let ceil = value.ceil().to_integer();
    let s = if ceil < BigInt::from(0) {
        0
    } else {
        u64::try_from(&ceil).expect("small")
    };
    Ok((s, value))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrdpReport {
    pub q: u64,
    pub n: u64,
    pub contains: bool,
    /// Defining polynomial of `F_f` and the witness root of the minimal
    /// polynomial of `ζ_n + ζ_n^{-1}` in it.
    pub twist_field_poly: String,
    pub witness: Option<String>,
}

/// Check that `F_f` contains `Q(ζ_n + ζ_n^{-1})` for a tamely dihedral
/// type of order `n` at `q`.
pub fn verify_ordp(f: &Eigenform, q: u64, n: u64) -> Result<OrdpReport, GaloisError> {
    match f.local_type(q).map(|lt| lt.kind) {
        Some(LocalKind::TamelyDihedral { order }) if order == n => {}
        other => {
            return Err(GaloisError::Precondition(format!(
                "local type at {q} is {}, not tamely dihedral of order {n}",
                other.map(|k| k.name()).unwrap_or("absent")
            )))
        }
    }
    if valuation(f.level, q) != 2 {
        return Err(GaloisError::Precondition(format!(
            "{q}² does not exactly divide N"
        )));
    }
    let g = gcd(n, q * (q - 1));
    if g != 1 {
        return Err(GaloisError::Precondition(format!(
            "gcd({n}, {q}·{}) = {g} ≠ 1",
            q - 1
        )));
    }
    let ff = twist_invariant_field(f, f.bound)?;
    let witness = contains_real_cyclotomic(&ff.field, n)?;
    Ok(OrdpReport {
        q,
        n,
        contains: witness.is_some(),
        twist_field_poly: ff.field.poly().to_string(),
        witness: witness.map(|w| ff.field.format(&w)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newform_data::fixtures;
    use crate::newform_data::LocalType;
    use std::collections::BTreeMap;

    #[test]
    fn cm_examples() {
        let f27 = fixtures::load("27a").unwrap();
        let r = detect_cm(&f27, 500).unwrap();
        assert_eq!(r.discriminant, Some(-3));
        for p in f27.good_primes(499) {
            if p % 3 == 2 {
                assert!(f27.ap[&p].is_zero());
            }
        }
        let f11 = fixtures::load("11a").unwrap();
        let r = detect_cm(&f11, 1000).unwrap();
        assert_eq!(r.discriminant, None);
        assert_eq!(r.support, vec![2]);
        assert_eq!(r.refuted.len(), 3);
        assert!(detect_cm(&f11, 20_000).is_err());
    }

    #[test]
    fn inner_twist_examples() {
        let f11 = fixtures::load("11a").unwrap();
        let r = detect_inner_twists(&f11, 1000).unwrap();
        assert!(r.is_trivial());
        assert_eq!(r.gamma.len(), 1);
        assert_eq!(r.twist_field.degree(), 1);
        let td = fixtures::load("synthetic-td29").unwrap();
        let r = detect_inner_twists(&td, 2000).unwrap();
        assert!(r.is_trivial());
        assert_eq!(r.twist_field.degree(), 2);
        assert!(noit_checklist(&td).unwrap().passes);
    }

    #[test]
    fn constructed_inner_twist() {
        // a_p·(−4|p) = σ(a_p): take a_p = √5·c_p for p ≡ 3 mod 4, rational otherwise
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        let sqrt5 = k.sub(
            &k.scale(&k.generator(), &crate::algebra::poly::rat(2)),
            &k.one(),
        );
        let mut ap = BTreeMap::new();
        for p in crate::primes::primes_up_to(200) {
            let c = k.from_int((p % 7) as i64 - 3);
            let a = if p % 4 == 3 { k.mul(&sqrt5, &c) } else { c };
            ap.insert(p, a);
        }
        let f = Eigenform::new(
            "constructed",
            1,
            2,
            DirichletCharacter::trivial(1),
            k,
            ap,
            BTreeMap::new(),
            200,
        )
        .unwrap();
        let r = detect_inner_twists(&f, 200).unwrap();
        let nontrivial: Vec<_> = r.nontrivial_pairs().collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].epsilon.fundamental_discriminant(), Some(-4));
        assert_eq!(r.twist_field.degree(), 1);
        assert_eq!(r.k_gamma.unwrap().degree(), 2);
    }

    #[test]
    fn compositum_degrees() {
        assert_eq!(quadratic_compositum(&[]).unwrap().degree(), 1);
        assert_eq!(quadratic_compositum(&[-4, 5]).unwrap().degree(), 4);
        assert_eq!(quadratic_compositum(&[-4, 5, -20]).unwrap().degree(), 4);
        assert_eq!(quadratic_compositum(&[-4, 5, 8]).unwrap().degree(), 8);
    }

    fn relabelled(level: u64, local: Vec<(u64, LocalKind)>) -> Eigenform {
        let base = fixtures::load("11a").unwrap();
        let mut ap = base.ap.clone();
        ap.retain(|&p, _| level % p != 0 || p == 11);
        let local_types = local
            .into_iter()
            .map(|(q, kind)| (q, LocalType { prime: q, kind }))
            .collect();
        Eigenform::new(
            "relabelled",
            level,
            2,
            DirichletCharacter::trivial(1),
            base.field.clone(),
            ap,
            local_types,
            base.bound,
        )
        .unwrap()
    }

    #[test]
    fn checklist_examples() {
        let f11 = fixtures::load("11a").unwrap();
        assert!(noit_checklist(&f11).unwrap().passes);
        let n = 11 * 29 * 29;
        let ok = relabelled(n, vec![(29, LocalKind::TamelyDihedral { order: 5 })]);
        assert!(noit_checklist(&ok).unwrap().passes);
        let bad = relabelled(n, vec![(29, LocalKind::TamelyDihedral { order: 7 })]);
        let report = noit_checklist(&bad).unwrap();
        assert!(!report.passes);
        assert!(report.trace.iter().any(|t| t.reason.contains("= 7")));
        let unknown = relabelled(n, vec![]);
        let report = noit_checklist(&unknown).unwrap();
        assert!(report
            .trace
            .iter()
            .any(|t| t.reason == "unknown local type"));
    }

    #[test]
    fn brumer_examples() {
        let v = |p, r| brumer_exponent(p, r).unwrap().0;
        assert_eq!(v(5, 3), 1);
        assert_eq!(v(3, 2), 0);
        assert_eq!(v(3, 4), 1);
        assert_eq!(
            brumer_exponent(5, 3).unwrap().1,
            crate::algebra::poly::rat_frac(1, 4)
        );
    }

    #[test]
    fn ordp_examples() {
        let td = fixtures::load("synthetic-td29").unwrap();
        let r = verify_ordp(&td, 29, 5).unwrap();
        assert!(r.contains);
        let k = &td.field;
        let w = r.witness.unwrap();
        assert!(
            w == k.format(&k.sub(&k.generator(), &k.one()))
                || w == k.format(&k.neg(&k.generator()))
        );
        let rational = relabelled(
            11 * 29 * 29,
            vec![(29, LocalKind::TamelyDihedral { order: 5 })],
        );
        assert!(!verify_ordp(&rational, 29, 5).unwrap().contains);
        let bad = relabelled(
            11 * 29 * 29,
            vec![(29, LocalKind::TamelyDihedral { order: 7 })],
        );
        assert!(verify_ordp(&bad, 29, 7).is_err());
    }
}
