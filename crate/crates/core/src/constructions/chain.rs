//! Families built by repeated level raising: each step adds `q_i²` to the
//! level and a tamely dihedral prime of order `p_i`.
//!
//! The checker only reads the supplied eigenforms; a passing chain is
//! evidence that the recorded forms have the claimed shape, not a
//! construction of them.

use serde::{Deserialize, Serialize};

use super::{
    nonexc_hypotheses_check, split_in_multiquadratic, td_certificate, verdict_of, Check,
    ConstructionError, NonexcQuery, Outcome, Verdict,
};
use crate::algebra::arith::{factorize, is_prime};
use crate::galois_image::noit_checklist;
use crate::newform_data::Eigenform;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChainStepSpec {
    /// Fixture label of the form at this step.
    pub form: String,
    /// Prime added to the level; absent on the base step.
    #[serde(default)]
    pub q: Option<u64>,
    /// Order of the tamely dihedral type at `q`.
    #[serde(default)]
    pub order: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChainManifest {
    pub steps: Vec<ChainStepSpec>,
}

impl ChainManifest {
    pub fn parse(text: &str) -> Result<Self, ConstructionError> {
        let m: ChainManifest =
            serde_json::from_str(text).map_err(|e| ConstructionError::Manifest(e.to_string()))?;
        let Some(base) = m.steps.first() else {
            return Err(ConstructionError::Manifest("no steps".into()));
        };
        if base.q.is_some() || base.order.is_some() {
            return Err(ConstructionError::Manifest(
                "the base step takes no q or order".into(),
            ));
        }
        if let Some(s) = m.steps[1..]
            .iter()
            .find(|s| s.q.is_none() || s.order.is_none())
        {
            return Err(ConstructionError::Manifest(format!(
                "step {} needs both q and order",
                s.form
            )));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub index: usize,
    pub form: String,
    pub level: u64,
    pub q: Option<u64>,
    pub order: Option<u64>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// Non-exceptionality from the last two raising steps.
    pub final_check: Check,
    pub verdict: Verdict,
}

/// Check every raising step of `manifest`, loading forms through `load`.
pub fn family_chain_check<F>(
    manifest: &ChainManifest,
    mut load: F,
) -> Result<ChainReport, ConstructionError>
where
    F: FnMut(&str) -> Result<Eigenform, ConstructionError>,
{
    let forms: Vec<Eigenform> = manifest
        .steps
        .iter()
        .map(|s| load(&s.form))
        .collect::<Result<_, _>>()?;
    let mut steps = Vec::with_capacity(forms.len());
    for (i, (spec, f)) in manifest.steps.iter().zip(&forms).enumerate() {
        let checks = match (i, spec.q, spec.order) {
            (0, _, _) => vec![noit_check(f)],
            (_, Some(q), Some(p)) => step_checks(&forms[i - 1], f, q, p)?,
            _ => unreachable!("validated by ChainManifest::parse"),
        };
        steps.push(ChainStep {
            index: i,
            form: f.label.clone(),
            level: f.level,
            q: spec.q,
            order: spec.order,
            verdict: verdict_of(&checks),
            checks,
        });
    }
    let final_check = final_nonexc(manifest, &forms)?;
    let verdict = steps
        .iter()
        .fold(verdict_of(std::slice::from_ref(&final_check)), |v, s| {
            v.combine(s.verdict)
        });
    Ok(ChainReport {
        steps,
        final_check,
        verdict,
    })
}

fn step_checks(
    prev: &Eigenform,
    f: &Eigenform,
    q: u64,
    p: u64,
) -> Result<Vec<Check>, ConstructionError> {
    let n_prev = prev.level;
    let mut checks = Vec::new();
    let shape = n_prev.checked_mul(q * q) == Some(f.level) && n_prev % q != 0;
    checks.push(Check::from_bool(
        "N_i = N_{i−1}·q², q ∤ N_{i−1}",
        shape,
        format!("{n_prev}·{q}² vs {}", f.level),
    ));
    let mut split_primes: Vec<u64> = vec![2, 3];
    split_primes.extend(factorize(n_prev).into_iter().map(|(r, _)| r));
    split_primes.sort_unstable();
    split_primes.dedup();
    let bad = split_in_multiquadratic(q, &split_primes);
    checks.push(Check::from_bool(
        "q splits in Q(i, √p_j), p_j | 6N_{i−1}",
        bad.is_none(),
        match bad {
            None => format!("p_j ∈ {split_primes:?}"),
            Some(d) => format!("({d}|{q}) ≠ 1"),
        },
    ));
    checks.push(Check::from_bool(
        "p prime, p ≡ 1 mod 4",
        is_prime(p) && p % 4 == 1,
        format!("p = {p}"),
    ));
    checks.push(Check::from_bool(
        "p > N_{i−1}",
        p > n_prev,
        format!("{p} vs {n_prev}"),
    ));
    checks.push(Check::from_bool(
        "p > k+1",
        p > f.weight as u64 + 1,
        format!("k = {}", f.weight),
    ));
    checks.push(if f.level % q == 0 {
        let cert = td_certificate(f, q, p)?;
        let outcome = match cert.status {
            Verdict::Consistent => Outcome::Pass,
            Verdict::InsufficientData => Outcome::Unknown,
            Verdict::Refuted => Outcome::Fail,
        };
        Check::new(
            format!("tamely dihedral of order {p} at {q}"),
            outcome,
            cert.reason.unwrap_or_else(|| cert.status.to_string()),
        )
    } else {
        Check::from_bool(
            format!("tamely dihedral of order {p} at {q}"),
            false,
            "q ∤ N",
        )
    });
    checks.push(noit_check(f));
    Ok(checks)
}

fn noit_check(f: &Eigenform) -> Check {
    match noit_checklist(f) {
        Ok(r) => {
            let failed: Vec<String> = r
                .trace
                .iter()
                .filter(|t| !t.passed)
                .map(|t| t.q.to_string())
                .collect();
            // a failed rule only means the checklist cannot certify
            let outcome = if r.passes {
                Outcome::Pass
            } else {
                Outcome::Unknown
            };
            let detail = if failed.is_empty() {
                "every q | N passes a rule".to_string()
            } else {
                format!("no rule applies at {}", failed.join(", "))
            };
            Check::new("no inner twists", outcome, detail)
        }
        Err(e) => Check::new("no inner twists", Outcome::Unknown, e.to_string()),
    }
}

fn final_nonexc(manifest: &ChainManifest, forms: &[Eigenform]) -> Result<Check, ConstructionError> {
    const CLAUSE: &str = "non-exceptional from the last two raisings";
    let raised: Vec<(u64, u64)> = manifest.steps[1..]
        .iter()
        .filter_map(|s| Some((s.q?, s.order?)))
        .collect();
    let [.., (q, p), (u, t)] = raised[..] else {
        return Ok(Check::new(
            CLAUSE,
            Outcome::Unknown,
            format!("{} raising step(s), two needed", raised.len()),
        ));
    };
    let last = forms.last().expect("parse rejects empty manifests");
    let rep = nonexc_hypotheses_check(
        last,
        &NonexcQuery {
            q,
            p,
            r: 1,
            u,
            t,
            s: 1,
            auxiliaries: vec![],
        },
    )?;
    let outcome = match rep.verdict {
        Verdict::Consistent => Outcome::Pass,
        Verdict::InsufficientData => Outcome::Unknown,
        Verdict::Refuted => Outcome::Fail,
    };
    let detail = super::first_failure(&rep.checks).unwrap_or_else(|| rep.verdict.to_string());
    Ok(Check::new(CLAUSE, outcome, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newform_data::fixtures;

    fn loader(name: &str) -> Result<Eigenform, ConstructionError> {
        fixtures::load(name).map_err(|e| ConstructionError::Manifest(e.to_string()))
    }

    fn clause<'a>(step: &'a ChainStep, prefix: &str) -> &'a Check {
        step.checks
            .iter()
            .find(|c| c.clause.starts_with(prefix))
            .unwrap()
    }

    #[test]
    fn shipped_two_step_chain_is_refuted() {
        let m = ChainManifest::parse(
            r#"{"steps": [{"form": "23a"}, {"form": "synthetic-td29", "q": 29, "order": 5}]}"#,
        )
        .unwrap();
        let rep = family_chain_check(&m, loader).unwrap();
        assert_eq!(rep.verdict, Verdict::Refuted);
        let step = &rep.steps[1];
        assert_eq!(clause(step, "N_i").outcome, Outcome::Pass);
        assert_eq!(clause(step, "p prime").outcome, Outcome::Pass);
        // (2|29) = −1 and 5 < 23
        assert_eq!(clause(step, "q splits").outcome, Outcome::Fail);
        assert_eq!(clause(step, "p > N").outcome, Outcome::Fail);
        assert_eq!(clause(step, "tamely").outcome, Outcome::Pass);
        assert_eq!(rep.final_check.outcome, Outcome::Unknown);
    }

    #[test]
    fn order_seven_fails_congruence() {
        let m = ChainManifest::parse(
            r#"{"steps": [{"form": "23a"}, {"form": "synthetic-td29", "q": 29, "order": 7}]}"#,
        )
        .unwrap();
        let rep = family_chain_check(&m, loader).unwrap();
        assert_eq!(clause(&rep.steps[1], "p prime").outcome, Outcome::Fail);
        assert_eq!(clause(&rep.steps[1], "tamely").outcome, Outcome::Fail);
    }

    #[test]
    fn wrong_level_shape_fails() {
        let m = ChainManifest::parse(
            r#"{"steps": [{"form": "23a"}, {"form": "odd", "q": 29, "order": 5}]}"#,
        )
        .unwrap();
        let rep = family_chain_check(&m, |name| {
            let mut f = loader(if name == "odd" {
                "synthetic-td29"
            } else {
                name
            })?;
            if name == "odd" {
                f.level = 23 * 29;
            }
            Ok(f)
        })
        .unwrap();
        assert_eq!(clause(&rep.steps[1], "N_i").outcome, Outcome::Fail);
        assert_eq!(rep.verdict, Verdict::Refuted);
    }

    #[test]
    fn manifest_validation() {
        assert!(ChainManifest::parse(r#"{"steps": []}"#).is_err());
        assert!(ChainManifest::parse(r#"{"steps": [{"form": "a", "q": 3}]}"#).is_err());
        assert!(
            ChainManifest::parse(r#"{"steps": [{"form": "a"}, {"form": "b", "q": 3}]}"#).is_err()
        );
        assert!(ChainManifest::parse(r#"{"steps": [{"form": "a", "extra": 1}]}"#).is_err());
        assert!(family_chain_check(
            &ChainManifest::parse(r#"{"steps": [{"form": "missing"}]}"#).unwrap(),
            loader
        )
        .is_err());
    }
}
