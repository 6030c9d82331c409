//! Eigenform tables and local types, with the JSON wire format.
//!
//! Wire format (UTF-8, one object per file, unknown fields rejected):
//!
//! ```json
//! {
//!   "label": "11a",
//!   "level": 11,
//!   "weight": 2,
//!   "nebentypus": { "modulus": 1, "generator_images": [] },
//!   "field_poly": [0, 1],
//!   "ap": { "2": ["-2/1"], "3": ["-1/1"] },
//!   "local_types": { "11": { "kind": "multiplicative" } },
//!   "bound": 3
//! }
//! ```
//!
//! `generator_images[i] = [num, den]` sends the `i`-th canonical generator
//! of `(Z/mZ)^×` to `exp(2πi·num/den)`. Each `ap` entry is the coordinate
//! vector of `a_p` in the power basis of `Q[x]/(field_poly)`, rationals
//! written `num/den` (a bare integer is also accepted on input).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::character::{CharacterError, CharacterValues, DirichletCharacter};
use crate::algebra::arith::{is_prime, valuation};
use crate::algebra::{AlgebraError, NfElem, NumberField, PolyInt};
use crate::primes::primes_up_to;

#[derive(Debug, Error)]
pub enum EigenformError {
    #[error("malformed document: {0}")]
    Wire(String),
    #[error("coefficient gap: a_{p} missing below the bound {bound}")]
    CoefficientGap { p: u64, bound: u64 },
    #[error("field polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("field polynomial must be monic of positive degree")]
    NotMonic,
    #[error("nebentypus modulus {modulus} does not divide the level {level}")]
    NebentypusModulus { modulus: u64, level: u64 },
    #[error("local type mismatch at q={q}: {detail}")]
    LocalTypeMismatch { q: u64, detail: String },
    #[error("bad coefficient at p={p}: {detail}")]
    BadCoefficient { p: u64, detail: String },
    #[error("invalid header: {0}")]
    Header(String),
    #[error("nebentypus: {0}")]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Algebra(AlgebraError),
}

impl From<AlgebraError> for EigenformError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NotIrreducible(s) => EigenformError::NotIrreducible(s),
            AlgebraError::NotMonic => EigenformError::NotMonic,
            other => EigenformError::Algebra(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalKind {
    Unramified,
    /// Steinberg-type, `q ∥ N`.
    Multiplicative,
    /// Induced from a tame niveau-2 character of the given order; `q² ∥ N`.
    TamelyDihedral {
        order: u64,
    },
    /// Principal series with a ramified character, optionally of known
    /// order (upper-triangular local image).
    RamifiedPrincipalSeries {
        order: Option<u64>,
    },
    Unknown,
}

impl LocalKind {
    pub fn name(&self) -> &'static str {
        match self {
            LocalKind::Unramified => "unramified",
            LocalKind::Multiplicative => "multiplicative",
            LocalKind::TamelyDihedral { .. } => "tamely_dihedral",
            LocalKind::RamifiedPrincipalSeries { .. } => "ramified_principal_series",
            LocalKind::Unknown => "unknown",
        }
    }

    pub fn order(&self) -> Option<u64> {
        match *self {
            LocalKind::TamelyDihedral { order } => Some(order),
            LocalKind::RamifiedPrincipalSeries { order } => order,
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalType {
    pub prime: u64,
    pub kind: LocalKind,
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind.order() {
            Some(n) => write!(f, "{} of order {n} at {}", self.kind.name(), self.prime),
            None => write!(f, "{} at {}", self.kind.name(), self.prime),
        }
    }
}

/// A normalized eigenform known through its Hecke eigenvalues at primes.
#[derive(Clone, Debug)]
pub struct Eigenform {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub nebentypus: DirichletCharacter,
    pub field: NumberField,
    /// `a_p` for every prime `p <= bound` not dividing the level, and for
    /// `p | N` when supplied.
    pub ap: BTreeMap<u64, NfElem>,
    pub local_types: BTreeMap<u64, LocalType>,
    pub bound: u64,
    chi_values: CharacterValues,
}

impl PartialEq for Eigenform {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.level == other.level
            && self.weight == other.weight
            && self.nebentypus == other.nebentypus
            && self.field == other.field
            && self.ap == other.ap
            && self.local_types == other.local_types
            && self.bound == other.bound
    }
}

impl Eigenform {
    /// Assemble and check the structural invariants: eigenvalues present
    /// for all good primes up to the bound, nebentypus modulus dividing the
    /// level with values in the coefficient field, and local types
    /// compatible with the level.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        level: u64,
        weight: u32,
        nebentypus: DirichletCharacter,
        field: NumberField,
        ap: BTreeMap<u64, NfElem>,
        local_types: BTreeMap<u64, LocalType>,
        bound: u64,
    ) -> Result<Self, EigenformError> {
        if level == 0 {
            return Err(EigenformError::Header("level must be positive".into()));
        }
        if weight < 2 {
            return Err(EigenformError::Header(format!("weight {weight} below 2")));
        }
        if bound < 2 {
            return Err(EigenformError::Header(format!("bound {bound} below 2")));
        }
        for (&p, a) in &ap {
            if !is_prime(p) {
                return Err(EigenformError::BadCoefficient {
                    p,
                    detail: "index is not prime".into(),
                });
            }
            if !field.contains(a) {
                return Err(EigenformError::BadCoefficient {
                    p,
                    detail: format!("expected {} coordinates", field.degree()),
                });
            }
        }
        if let Some(p) = primes_up_to(bound)
            .into_iter()
            .find(|&p| level % p != 0 && !ap.contains_key(&p))
        {
            return Err(EigenformError::CoefficientGap { p, bound });
        }
        if level % nebentypus.modulus() != 0 {
            return Err(EigenformError::NebentypusModulus {
                modulus: nebentypus.modulus(),
                level,
            });
        }
        for (&q, lt) in &local_types {
            check_local_type(level, q, lt)?;
        }
        let chi_values = nebentypus.values_in(&field)?;
        Ok(Eigenform {
            label: label.into(),
            level,
            weight,
            nebentypus,
            field,
            ap,
            local_types,
            bound,
            chi_values,
        })
    }

    pub fn ap(&self, p: u64) -> Option<&NfElem> {
        self.ap.get(&p)
    }

    /// `χ(p)` inside the coefficient field.
    pub fn chi(&self, p: u64) -> NfElem {
        self.chi_values.value(p as i64)
    }

    pub fn chi_values(&self) -> &CharacterValues {
        &self.chi_values
    }

    pub fn local_type(&self, q: u64) -> Option<&LocalType> {
        self.local_types.get(&q)
    }

    /// Primes `p <= bound` with `p ∤ N`, in order.
    pub fn good_primes(&self, bound: u64) -> Vec<u64> {
        primes_up_to(bound.min(self.bound))
            .into_iter()
            .filter(|&p| self.level % p != 0)
            .collect()
    }

    /// Prime divisors of the level with their exponents.
    pub fn level_factorization(&self) -> Vec<(u64, u32)> {
        crate::algebra::arith::factorize(self.level)
    }

    pub fn parse(text: &str) -> Result<Self, EigenformError> {
        let doc: EigenformDoc =
            serde_json::from_str(text).map_err(|e| EigenformError::Wire(e.to_string()))?;
        doc.into_eigenform()
    }

    /// Canonical serialization (pretty JSON with a trailing newline); the
    /// output parses back to an equal eigenform.
    pub fn serialize(&self) -> String {
        let doc = EigenformDoc::from_eigenform(self);
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn check_local_type(level: u64, q: u64, lt: &LocalType) -> Result<(), EigenformError> {
    let mismatch = |detail: String| Err(EigenformError::LocalTypeMismatch { q, detail });
    if lt.prime != q {
        return mismatch(format!("entry keyed by {q} describes {}", lt.prime));
    }
    let v = if is_prime(q) { valuation(level, q) } else { 0 };
    if v == 0 {
        return mismatch(format!("{q} does not divide the level {level}"));
    }
    match lt.kind {
        LocalKind::Unramified => mismatch(format!("unramified but {q} | {level}")),
        LocalKind::Multiplicative if v != 1 => {
            mismatch(format!("multiplicative requires {q} ∥ N, found {q}^{v}"))
        }
        LocalKind::TamelyDihedral { .. } if v != 2 => {
            mismatch(format!("tamely dihedral requires {q}² ∥ N, found {q}^{v}"))
        }
        LocalKind::TamelyDihedral { order: 0 } => mismatch("order must be positive".into()),
        _ => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NebentypusDoc {
    modulus: u64,
    generator_images: Vec<[i64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalTypeDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenformDoc {
    label: String,
    level: u64,
    weight: u32,
    nebentypus: NebentypusDoc,
    field_poly: Vec<i64>,
    ap: BTreeMap<u64, Vec<String>>,
    local_types: BTreeMap<u64, LocalTypeDoc>,
    bound: u64,
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl EigenformDoc {
    fn into_eigenform(self) -> Result<Eigenform, EigenformError> {
        let poly = PolyInt::from_i64(&self.field_poly);
        let field = NumberField::new(poly)?;
        let mut ap = BTreeMap::new();
        for (p, coords) in self.ap {
            if coords.len() != field.degree() {
                return Err(EigenformError::BadCoefficient {
                    p,
                    detail: format!(
                        "{} coordinates for a degree-{} field",
                        coords.len(),
                        field.degree()
                    ),
                });
            }
            let coords = coords
                .iter()
                .map(|c| {
                    parse_rational(c).ok_or_else(|| EigenformError::BadCoefficient {
                        p,
                        detail: format!("unreadable rational {c:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            ap.insert(p, field.from_coords(coords)?);
        }
        let mut local_types = BTreeMap::new();
        for (q, lt) in self.local_types {
            let kind = match (lt.kind.as_str(), lt.order) {
                ("unramified", None) => LocalKind::Unramified,
                ("multiplicative", None) => LocalKind::Multiplicative,
                ("tamely_dihedral", Some(order)) => LocalKind::TamelyDihedral { order },
                ("tamely_dihedral", None) => {
                    return Err(EigenformError::LocalTypeMismatch {
                        q,
                        detail: "tamely_dihedral needs an order".into(),
                    })
                }
                ("ramified_principal_series", order) => {
                    LocalKind::RamifiedPrincipalSeries { order }
                }
                ("unknown", None) => LocalKind::Unknown,
                (kind, _) => {
                    return Err(EigenformError::Wire(format!(
                        "unsupported local type {kind:?} at {q}"
                    )))
                }
            };
            local_types.insert(q, LocalType { prime: q, kind });
        }
        let images: Vec<(i64, i64)> = self
            .nebentypus
            .generator_images
            .iter()
            .map(|&[n, d]| (n, d))
            .collect();
        let nebentypus = DirichletCharacter::new(self.nebentypus.modulus, &images)?;
        Eigenform::new(
            self.label,
            self.level,
            self.weight,
            nebentypus,
            field,
            ap,
            local_types,
            self.bound,
        )
    }

    fn from_eigenform(f: &Eigenform) -> Self {
        let field_poly = f
            .field
            .poly()
            .coeffs()
            .iter()
            .map(|c| i64::try_from(c).expect("field polynomial fits the wire format"))
            .collect();
        let ap =
            f.ap.iter()
                .map(|(&p, a)| (p, a.coords().iter().map(format_rational).collect()))
                .collect();
        let local_types = f
            .local_types
            .iter()
            .map(|(&q, lt)| {
                (
                    q,
                    LocalTypeDoc {
                        kind: lt.kind.name().to_string(),
                        order: lt.kind.order(),
                    },
                )
            })
            .collect();
        EigenformDoc {
            label: f.label.clone(),
            level: f.level,
            weight: f.weight,
            nebentypus: NebentypusDoc {
                modulus: f.nebentypus.modulus(),
                generator_images: f
                    .nebentypus
                    .generator_images()
                    .into_iter()
                    .map(|(n, d)| [n, d])
                    .collect(),
            },
            field_poly,
            ap,
            local_types,
            bound: f.bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> String {
        r#"{
  "label": "t",
  "level": 11,
  "weight": 2,
  "nebentypus": { "modulus": 1, "generator_images": [] },
  "field_poly": [0, 1],
  "ap": { "2": ["-2/1"], "3": ["-1"], "5": ["1/1"], "7": ["-2/1"] },
  "local_types": { "11": { "kind": "multiplicative" } },
  "bound": 10
}"#
        .to_string()
    }

    #[test]
    fn parse_and_round_trip() {
        let f = Eigenform::parse(&tiny()).unwrap();
        assert_eq!(f.level, 11);
        assert_eq!(f.ap(3).unwrap(), &f.field.from_int(-1));
        let text = f.serialize();
        let g = Eigenform::parse(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(text, g.serialize());
    }

    #[test]
    fn named_errors() {
        let gap = tiny().replace(r#""7": ["-2/1"]"#, r#""11": ["1/1"]"#);
        assert!(matches!(
            Eigenform::parse(&gap),
            Err(EigenformError::CoefficientGap { p: 7, .. })
        ));
        let td = tiny().replace(
            r#"{ "kind": "multiplicative" }"#,
            r#"{ "kind": "tamely_dihedral", "order": 5 }"#,
        );
        let err = Eigenform::parse(&td).unwrap_err();
        assert!(matches!(
            err,
            EigenformError::LocalTypeMismatch { q: 11, .. }
        ));
        assert!(err.to_string().contains("local type mismatch"));
        let reducible = tiny().replace("[0, 1]", "[-1, 0, 1]");
        assert!(matches!(
            Eigenform::parse(&reducible),
            Err(EigenformError::NotIrreducible(_))
        ));
        let neben = tiny().replace(
            r#"{ "modulus": 1, "generator_images": [] }"#,
            r#"{ "modulus": 4, "generator_images": [[1, 2]] }"#,
        );
        assert!(matches!(
            Eigenform::parse(&neben),
            Err(EigenformError::NebentypusModulus {
                modulus: 4,
                level: 11
            })
        ));
        let extra = tiny().replace(r#""bound": 10"#, r#""bound": 10, "extra": 1"#);
        assert!(matches!(
            Eigenform::parse(&extra),
            Err(EigenformError::Wire(_))
        ));
    }
}
