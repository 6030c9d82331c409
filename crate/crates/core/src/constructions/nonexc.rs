//! Hypotheses under which two tamely dihedral primes force a
//! non-exceptional projective image at every `Λ`.

use serde::Serialize;

use super::{split_in_multiquadratic, td_certificate, Check, ConstructionError, Outcome, Verdict};
use crate::algebra::arith::{factorize, gcd, is_prime};
use crate::groups::kronecker_symbol;
use crate::newform_data::Eigenform;

/// Tamely dihedral of order `p^r` at `q` and of order `t^s` at `u`.
#[derive(Clone, Debug, Serialize)]
pub struct NonexcQuery {
    pub q: u64,
    pub p: u64,
    pub r: u32,
    pub u: u64,
    pub t: u64,
    pub s: u32,
    /// Extra primes that `q` and `u` must split in.
    pub auxiliaries: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonexcReport {
    pub label: String,
    pub holds: bool,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

pub fn nonexc_hypotheses_check(
    f: &Eigenform,
    query: &NonexcQuery,
) -> Result<NonexcReport, ConstructionError> {
    let NonexcQuery {
        q, p, r, u, t, s, ..
    } = *query;
    let mut checks = Vec::new();

    let four = [p, q, t, u];
    let distinct = four.iter().enumerate().all(|(i, a)| !four[..i].contains(a));
    let odd_primes = four.iter().all(|&a| a > 2 && is_prime(a));
    checks.push(Check::from_bool(
        "p, q, t, u distinct odd primes",
        distinct && odd_primes,
        format!("p={p} q={q} t={t} u={u}"),
    ));
    if !(distinct && odd_primes) {
        return Ok(report(f, checks));
    }

    let (pr, ts) = match (p.checked_pow(r), t.checked_pow(s)) {
        (Some(a), Some(b)) if r > 0 && s > 0 => (a, b),
        _ => {
            return Err(ConstructionError::InvalidQuery(format!(
                "orders {p}^{r}, {t}^{s} must be positive and fit in 64 bits"
            )))
        }
    };
    checks.push(Check::from_bool(
        "p^r > 5 and t^s > 5",
        pr > 5 && ts > 5,
        format!("p^r = {pr}, t^s = {ts}"),
    ));

    let square = (q * u) as u128 * (q * u) as u128;
    let n_prime = if f.level as u128 % square == 0 {
        Some(f.level / (square as u64))
    } else {
        None
    };
    let pqtu = p * q * t * u;
    checks.push(match n_prime {
        Some(np) => Check::from_bool(
            "N = N'·q²·u², gcd(N', pqtu) = 1",
            gcd(np, pqtu) == 1,
            format!("N' = {np}"),
        ),
        None => Check::from_bool(
            "N = N'·q²·u², gcd(N', pqtu) = 1",
            false,
            format!("q²u² ∤ {}", f.level),
        ),
    });

    // primes of 6N' together with the auxiliaries
    let mut split_primes: Vec<u64> = vec![2, 3];
    if let Some(np) = n_prime {
        split_primes.extend(factorize(np).into_iter().map(|(pj, _)| pj));
    }
    split_primes.extend(&query.auxiliaries);
    split_primes.sort_unstable();
    split_primes.dedup();
    for (name, x) in [("q", q), ("u", u)] {
        let bad = split_in_multiquadratic(x, &split_primes);
        checks.push(Check::from_bool(
            format!("{name} splits in Q(i, √p_j)"),
            bad.is_none(),
            match bad {
                None => format!("p_j ∈ {split_primes:?}"),
                Some(d) => format!("({d}|{x}) ≠ 1"),
            },
        ));
    }
    let qu = kronecker_symbol(q as i64, u as i64);
    checks.push(Check::from_bool(
        "(q|u) = 1",
        qu == 1,
        format!("({q}|{u}) = {qu}"),
    ));

    for (x, order) in [(q, pr), (u, ts)] {
        let clause = format!("tamely dihedral of order {order} at {x}");
        checks.push(if f.level % x != 0 {
            Check::from_bool(clause, false, format!("{x} ∤ N"))
        } else {
            let cert = td_certificate(f, x, order)?;
            let outcome = match cert.status {
                Verdict::Consistent => Outcome::Pass,
                Verdict::InsufficientData => Outcome::Unknown,
                Verdict::Refuted => Outcome::Fail,
            };
            Check::new(
                clause,
                outcome,
                cert.reason.unwrap_or_else(|| cert.status.to_string()),
            )
        });
    }
    Ok(report(f, checks))
}

fn report(f: &Eigenform, checks: Vec<Check>) -> NonexcReport {
    let verdict = super::verdict_of(&checks);
    NonexcReport {
        label: f.label.clone(),
        holds: verdict == Verdict::Consistent,
        verdict,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois_image::{classify_image, detect_inner_twists, ImageStatus, ReductionContext};
    use crate::newform_data::fixtures;
    use std::sync::Arc;

    fn query(q: u64, p: u64, u: u64, t: u64) -> NonexcQuery {
        NonexcQuery {
            q,
            p,
            r: 1,
            u,
            t,
            s: 1,
            auxiliaries: vec![],
        }
    }

    #[test]
    fn degree_fifteen_fixture_meets_hypotheses() {
        let f = fixtures::load("synthetic-nonexc").unwrap();
        let rep = nonexc_hypotheses_check(&f, &query(97, 7, 241, 11)).unwrap();
        assert!(rep.holds, "{:?}", rep.checks);
        // swapping roles changes nothing
        assert!(
            nonexc_hypotheses_check(&f, &query(241, 11, 97, 7))
                .unwrap()
                .holds
        );
        // 5 is a non-residue mod 97
        let mut aux = query(97, 7, 241, 11);
        aux.auxiliaries = vec![5];
        assert_eq!(
            nonexc_hypotheses_check(&f, &aux).unwrap().verdict,
            Verdict::Refuted
        );
    }

    #[test]
    fn order_five_and_bad_congruences_fail() {
        let f = fixtures::load("synthetic-td29").unwrap();
        let rep = nonexc_hypotheses_check(&f, &query(29, 5, 23, 11)).unwrap();
        assert!(!rep.holds);
        let c = rep
            .checks
            .iter()
            .find(|c| c.clause.starts_with("p^r"))
            .unwrap();
        assert_eq!(c.outcome, Outcome::Fail);
        // 23 ≡ 3 mod 4 is inert in Q(i)
        let c = rep
            .checks
            .iter()
            .find(|c| c.clause.starts_with("u splits"))
            .unwrap();
        assert_eq!(c.outcome, Outcome::Fail);
        let rep = nonexc_hypotheses_check(&f, &query(29, 5, 29, 11)).unwrap();
        assert_eq!(rep.checks.len(), 1);
        assert!(!rep.holds);
    }

    #[test]
    fn no_exceptional_image_below_fifty() {
        let f = Arc::new(fixtures::load("synthetic-nonexc").unwrap());
        let twists = detect_inner_twists(&f, f.bound).unwrap();
        for ell in crate::primes::primes_up_to(50).into_iter().skip(1) {
            for ctx in ReductionContext::all_above(f.clone(), ell).unwrap() {
                let c = classify_image(&ctx, f.bound, Some(&twists)).unwrap();
                assert_ne!(
                    c.status,
                    ImageStatus::ExceptionalA4S4A5Consistent,
                    "ℓ={ell}"
                );
            }
        }
    }
}
