//! The level-raising prime sieve: primes `q ≡ p − 1 mod p²` that split
//! completely in `Q(i, √p_1, …, √p_r)`, optionally with `ā_q ≡ 0 mod Λ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::ConstructionError;
use crate::algebra::arith::is_prime;
use crate::galois_image::ReductionContext;
use crate::groups::{sieve_density, SieveCondition};
use crate::par;
use crate::primes::prime_pi;

/// Width of the `k`-ranges handed to each worker, where `q = p − 1 + k·p²`.
const SIEVE_CHUNK: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct RaiseQuery {
    pub p: u64,
    pub auxiliaries: Vec<u64>,
    /// `Λ` over `p` for the trace-zero surrogate of the conjugacy condition.
    pub trace: Option<ReductionContext>,
    pub bound: u64,
}

impl RaiseQuery {
    pub fn new(p: u64, auxiliaries: &[u64], bound: u64) -> Result<Self, ConstructionError> {
        if p < 3 || !is_prime(p) {
            return Err(ConstructionError::InvalidQuery(format!(
                "p = {p} must be an odd prime"
            )));
        }
        if bound < 2 {
            return Err(ConstructionError::InvalidQuery("bound below 2".into()));
        }
        let mut auxiliaries = auxiliaries.to_vec();
        auxiliaries.sort_unstable();
        auxiliaries.dedup();
        if let Some(&a) = auxiliaries.iter().find(|&&a| a == p || !is_prime(a)) {
            return Err(ConstructionError::InvalidQuery(format!(
                "auxiliary {a} must be a prime different from p"
            )));
        }
        Ok(RaiseQuery {
            p,
            auxiliaries,
            trace: None,
            bound,
        })
    }

    pub fn with_trace(mut self, ctx: ReductionContext) -> Result<Self, ConstructionError> {
        if ctx.ell() != self.p {
            return Err(ConstructionError::InvalidQuery(format!(
                "Λ lies over {}, not over p = {}",
                ctx.ell(),
                self.p
            )));
        }
        self.trace = Some(ctx);
        Ok(self)
    }

    /// Conditions (i) and (ii) as sieve conditions.
    pub fn conditions(&self) -> Result<Vec<SieveCondition>, ConstructionError> {
        let p2 = self.p * self.p;
        let mut out = vec![
            SieveCondition::congruence(p2, &[self.p - 1])?,
            SieveCondition::kronecker_split(-1)?,
        ];
        for &a in &self.auxiliaries {
            out.push(SieveCondition::kronecker_split(a as i64)?);
        }
        Ok(out)
    }
}

/// A prime `q ≡ p − 1 mod p²` with its remaining flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaiseHit {
    pub q: u64,
    /// `(−1|q) = 1`.
    pub split_i: bool,
    /// `(p_i|q) = 1` for each auxiliary, in query order.
    pub split_aux: Vec<bool>,
    /// `ā_q ≡ 0 mod Λ`; `None` without a trace condition or when `a_q`
    /// is not available (`q | N` or `q` beyond the table).
    pub trace_zero: Option<bool>,
}

impl RaiseHit {
    /// Conditions (i) and (ii).
    pub fn splits(&self) -> bool {
        self.split_i && self.split_aux.iter().all(|&b| b)
    }

    /// Every requested condition holds (an unknown trace flag does not).
    pub fn qualifies(&self, with_trace: bool) -> bool {
        self.splits() && (!with_trace || self.trace_zero == Some(true))
    }
}

/// Every odd prime `q <= bound` with `q ≡ p − 1 mod p²`, in increasing
/// order, with the flags of conditions (ii) and (iii).
pub fn raise_sieve(query: &RaiseQuery) -> Result<Vec<RaiseHit>, ConstructionError> {
    let conditions = query.conditions()?;
    let p = query.p;
    let p2 = p * p;
    if query.bound < p - 1 {
        return Ok(Vec::new());
    }
    let kmax = (query.bound - (p - 1)) / p2;
    let ranges = par::chunks(0, kmax, SIEVE_CHUNK);
    let pieces = par::map(&ranges, |&(lo, hi)| {
        (lo..=hi)
            .map(|k| p - 1 + k * p2)
            .filter(|&q| q > 2 && is_prime(q))
            .map(|q| {
                assert_eq!((q + 1) % p, 0, "emitted q ≢ −1 mod p");
                RaiseHit {
                    q,
                    split_i: conditions[1].holds(q),
                    split_aux: conditions[2..].iter().map(|c| c.holds(q)).collect(),
                    trace_zero: query.trace.as_ref().and_then(|ctx| {
                        if ctx.form.level % q == 0 {
                            return None;
                        }
                        ctx.abar(q).map(|a| a.is_zero())
                    }),
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(pieces.into_iter().flatten().collect())
}

/// Predicted and observed density of the primes meeting (i) and (ii).
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub p: u64,
    pub auxiliaries: Vec<u64>,
    pub bound: u64,
    pub conditions: Vec<String>,
    #[serde(serialize_with = "crate::constructions::sieve::ser_rational")]
    pub predicted: BigRational,
    pub hits: u64,
    pub prime_count: u64,
    #[serde(serialize_with = "crate::constructions::sieve::ser_rational")]
    pub empirical: BigRational,
    /// `empirical / predicted`.
    pub ratio: f64,
    pub first_hit: Option<u64>,
    /// `(hits with ā_q ≡ 0, hits with ā_q known)` under the trace-zero
    /// surrogate. No prediction is made for it.
    pub trace_frequency: Option<(u64, u64)>,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn sieve_density_report(query: &RaiseQuery) -> Result<DensityReport, ConstructionError> {
    if query.bound < 1000 {
        return Err(ConstructionError::InvalidQuery(format!(
            "density reports need bound >= 1000, got {}",
            query.bound
        )));
    }
    let conditions = query.conditions()?;
    let predicted = sieve_density(&conditions)?;
    let hits = raise_sieve(query)?;
    let split: Vec<&RaiseHit> = hits.iter().filter(|h| h.splits()).collect();
    let count = split.len() as u64;
    let pi = prime_pi(query.bound);
    let empirical = BigRational::new(BigInt::from(count), BigInt::from(pi));
    let ratio = (&empirical / &predicted).to_f64().unwrap_or(f64::NAN);
    let trace_frequency = query.trace.as_ref().map(|_| {
        let known: Vec<bool> = split.iter().filter_map(|h| h.trace_zero).collect();
        (
            known.iter().filter(|&&z| z).count() as u64,
            known.len() as u64,
        )
    });
    Ok(DensityReport {
        p: query.p,
        auxiliaries: query.auxiliaries.clone(),
        bound: query.bound,
        conditions: conditions.iter().map(|c| c.to_string()).collect(),
        predicted,
        hits: count,
        prime_count: pi,
        empirical,
        ratio,
        first_hit: split.first().map(|h| h.q),
        trace_frequency,
    })
}

/// Parse `"4 mod 25; split -1; split 5"`: clauses separated by `;`, each
/// either `r[,r…] mod m` or `split d`.
pub fn parse_conditions(spec: &str) -> Result<Vec<SieveCondition>, ConstructionError> {
    let bad = |s: &str| ConstructionError::InvalidQuery(format!("cannot parse condition {s:?}"));
    spec.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|clause| {
            if let Some(d) = clause.strip_prefix("split") {
                let d: i64 = d.trim().parse().map_err(|_| bad(clause))?;
                return Ok(SieveCondition::kronecker_split(d)?);
            }
            let (residues, modulus) = clause.split_once("mod").ok_or_else(|| bad(clause))?;
            let modulus: u64 = modulus.trim().parse().map_err(|_| bad(clause))?;
            let residues: Vec<u64> = residues
                .split(',')
                .map(|r| {
                    r.trim()
                        .parse::<i64>()
                        .map(|r| r.rem_euclid(modulus as i64) as u64)
                })
                .collect::<Result<_, _>>()
                .map_err(|_| bad(clause))?;
            Ok(SieveCondition::congruence(modulus, &residues)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat_frac;
    use crate::groups::kronecker_symbol;
    use crate::newform_data::{ec_ap, EllipticCurveModel};
    use std::sync::Arc;

    #[test]
    fn first_hit_for_five() {
        let q = RaiseQuery::new(5, &[], 1000).unwrap();
        let hits = raise_sieve(&q).unwrap();
        assert_eq!(hits[0].q, 29);
        assert!(hits[0].qualifies(false));
        assert!(hits.iter().all(|h| h.q % 25 == 4 && (h.q + 1) % 5 == 0));
    }

    #[test]
    fn auxiliary_three_matches_residue_scan() {
        let q = RaiseQuery::new(5, &[3], 100_000).unwrap();
        let first = raise_sieve(&q)
            .unwrap()
            .into_iter()
            .find(|h| h.qualifies(false))
            .unwrap()
            .q;
        // independent scan: primes ≡ 29 mod 100 with q ≡ ±1 mod 12
        let scan = (0..)
            .map(|k| 29 + 100 * k)
            .find(|&n: &u64| is_prime(n) && (n % 12 == 1 || n % 12 == 11))
            .unwrap();
        assert_eq!(first, scan);
        assert_eq!(kronecker_symbol(3, first as i64), 1);
    }

    #[test]
    fn predicted_densities() {
        let q5 = RaiseQuery::new(5, &[], 10_000).unwrap();
        assert_eq!(
            sieve_density(&q5.conditions().unwrap()).unwrap(),
            rat_frac(1, 40)
        );
        let q3 = RaiseQuery::new(3, &[], 10_000).unwrap();
        assert_eq!(
            sieve_density(&q3.conditions().unwrap()).unwrap(),
            rat_frac(1, 12)
        );
        let report = sieve_density_report(&q3).unwrap();
        assert_eq!(report.predicted, rat_frac(1, 12));
        assert!(report.hits > 0);
        assert!(sieve_density_report(&RaiseQuery::new(3, &[], 999).unwrap()).is_err());
    }

    #[test]
    fn trace_condition_against_point_counts() {
        // 11a has a rational 5-torsion point, so a_q ≡ 1 + q ≡ 0 mod 5 for
        // every q ≡ −1 mod 5 of good reduction
        let f = Arc::new(crate::newform_data::fixtures::load("11a").unwrap());
        let e = EllipticCurveModel::new([0, -1, 1, -10, -20], "11a").unwrap();
        let ctx = ReductionContext::all_above(f.clone(), 5).unwrap().remove(0);
        let q = RaiseQuery::new(5, &[], 10_000)
            .unwrap()
            .with_trace(ctx.clone())
            .unwrap();
        let hits = raise_sieve(&q).unwrap();
        assert!(hits.iter().any(|h| h.qualifies(true)));
        for h in &hits {
            match h.trace_zero {
                Some(z) => {
                    assert!(z);
                    assert_eq!(ec_ap(&e, h.q).unwrap().rem_euclid(5), 0);
                }
                None => assert!(h.q > f.bound),
            }
        }
        let wrong = RaiseQuery::new(7, &[], 100).unwrap();
        assert!(wrong.with_trace(ctx).is_err());
    }

    #[test]
    fn query_validation() {
        assert!(RaiseQuery::new(4, &[], 100).is_err());
        assert!(RaiseQuery::new(2, &[], 100).is_err());
        assert!(RaiseQuery::new(5, &[5], 100).is_err());
        assert!(RaiseQuery::new(5, &[6], 100).is_err());
    }

    #[test]
    fn condition_specs() {
        let c = parse_conditions("4 mod 25; split -1").unwrap();
        assert_eq!(sieve_density(&c).unwrap(), rat_frac(1, 40));
        let c = parse_conditions("2 mod 9;split -1;").unwrap();
        assert_eq!(sieve_density(&c).unwrap(), rat_frac(1, 12));
        assert!(parse_conditions("4 mod x").is_err());
        assert!(parse_conditions("split").is_err());
        assert!(parse_conditions("5 mod 25").is_err());
    }
}
