//! Certificates and sieves built on the image classification: tamely
//! dihedral certificates, the level-raising prime sieve with its exact
//! density, hypothesis checkers for non-exceptional families and the
//! realization scan.
//!
//! Nothing here constructs newforms. Every check runs on supplied
//! eigenvalue tables and reports which clause passed, failed or could not
//! be decided.

pub mod chain;
pub mod nonexc;
pub mod scan;
pub mod sieve;
pub mod td;

use serde::Serialize;
use thiserror::Error;

use crate::galois_image::GaloisError;
use crate::groups::GroupError;

pub use chain::{family_chain_check, ChainManifest, ChainReport, ChainStep, ChainStepSpec};
pub use nonexc::{nonexc_hypotheses_check, NonexcQuery, NonexcReport};
pub use scan::{
    degree_slot_fraction, galois_group_table, realization_scan, RealizationRecord, ScanReport,
    SlotFraction,
};
pub use sieve::{
    parse_conditions, raise_sieve, sieve_density_report, DensityReport, RaiseHit, RaiseQuery,
};
pub use td::{td_certificate, TdCertificate};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("{q} does not divide the level {level}")]
    NotDividing { q: u64, level: u64 },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("malformed chain manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<crate::algebra::AlgebraError> for ConstructionError {
    fn from(e: crate::algebra::AlgebraError) -> Self {
        ConstructionError::Galois(e.into())
    }
}

/// Overall status of a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    InsufficientData,
    Refuted,
}

impl Verdict {
    /// Process exit code: 0 consistent, 1 refuted, 2 insufficient data.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Consistent => 0,
            Verdict::Refuted => 1,
            Verdict::InsufficientData => 2,
        }
    }

    /// Refuted dominates insufficient data, which dominates consistent.
    pub fn combine(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::InsufficientData => "insufficient-data",
            Verdict::Refuted => "refuted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

/// One named clause of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub clause: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    pub fn new(clause: impl Into<String>, outcome: Outcome, detail: impl Into<String>) -> Self {
        Check {
            clause: clause.into(),
            outcome,
            detail: detail.into(),
        }
    }

    pub fn from_bool(clause: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        Check::new(clause, outcome, detail)
    }
}

/// Any failure refutes; otherwise any unknown leaves the data insufficient.
pub fn verdict_of(checks: &[Check]) -> Verdict {
    checks.iter().fold(Verdict::Consistent, |v, c| {
        v.combine(match c.outcome {
            Outcome::Pass => Verdict::Consistent,
            Outcome::Unknown => Verdict::InsufficientData,
            Outcome::Fail => Verdict::Refuted,
        })
    })
}

/// The first failing clause, for one-line summaries.
pub fn first_failure(checks: &[Check]) -> Option<String> {
    checks
        .iter()
        .find(|c| c.outcome == Outcome::Fail)
        .map(|c| format!("{}: {}", c.clause, c.detail))
}

/// `q` splits completely in `Q(i, √p_1, …, √p_m)`, decided by Kronecker
/// symbols. Returns the offending `d` (`−1` or some `p_j`) if not.
pub fn split_in_multiquadratic(q: u64, primes: &[u64]) -> Option<i64> {
    use crate::groups::kronecker_symbol;
    if q == 2 {
        return Some(-1);
    }
    std::iter::once(-1i64)
        .chain(primes.iter().map(|&p| p as i64))
        .find(|&d| kronecker_symbol(d, q as i64) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_combine() {
        let pass = Check::from_bool("a", true, "");
        let fail = Check::from_bool("b", false, "why");
        let unknown = Check::new("c", Outcome::Unknown, "");
        assert_eq!(verdict_of(std::slice::from_ref(&pass)), Verdict::Consistent);
        assert_eq!(
            verdict_of(&[pass.clone(), unknown.clone()]),
            Verdict::InsufficientData
        );
        assert_eq!(verdict_of(&[unknown, fail.clone(), pass]), Verdict::Refuted);
        assert_eq!(first_failure(&[fail]).as_deref(), Some("b: why"));
        assert_eq!(Verdict::InsufficientData.exit_code(), 2);
    }

    #[test]
    fn multiquadratic_splitting() {
        assert_eq!(split_in_multiquadratic(97, &[2, 3]), None);
        assert_eq!(split_in_multiquadratic(7, &[]), Some(-1));
        assert_eq!(split_in_multiquadratic(13, &[2]), Some(2));
        assert_eq!(split_in_multiquadratic(2, &[]), Some(-1));
    }
}
