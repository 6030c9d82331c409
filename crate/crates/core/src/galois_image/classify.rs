//! Projective image classification from sampled Frobenius data.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::reduction::{
    is_small_prime, projective_order_from_u, u_invariant, ProjectiveOrder, ReductionContext,
};
use super::twists::{detect_inner_twists, InnerTwistReport};
use super::GaloisError;
use crate::algebra::arith::{factorize, is_prime, pow_mod, valuation};
use crate::algebra::finite_field::{factor_prime_power_minus_one, QuadAlgebra, QuadElem};
use crate::algebra::{FfElem, FiniteField};
use crate::groups::kronecker_symbol;
use crate::newform_data::character::{quadratic_discriminants, unit_generators};
use crate::par;

/// Cap on the number of `(ψ, a)` pairs tried by [`reducible_test`].
pub const REDUCIBLE_CANDIDATE_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub p: u64,
    pub quantity: String,
    pub role: String,
}

fn check_sample(ctx: &ReductionContext, bound: u64) -> Result<(), GaloisError> {
    if bound > ctx.form.bound {
        return Err(GaloisError::SampleBound {
            requested: bound,
            available: ctx.form.bound,
        });
    }
    if ctx.ell() == 2 {
        return Err(GaloisError::CharacteristicTwo);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DihedralOutcome {
    /// Every candidate `η` is killed: `(discriminant, p)` with `η(p) = −1`
    /// and `ā_p ≠ 0`.
    NonDihedral { witnesses: Vec<(i64, u64)> },
    /// Discriminants of the quadratic fields that survived.
    Consistent { fields: Vec<i64> },
}

/// Rule out projective images dihedral with respect to a quadratic field
/// unramified outside `2Nℓ`.
pub fn dihedral_test(ctx: &ReductionContext, bound: u64) -> Result<DihedralOutcome, GaloisError> {
    check_sample(ctx, bound)?;
    let mut support: Vec<u64> = vec![2, ctx.ell()];
    support.extend(ctx.form.level_factorization().into_iter().map(|(q, _)| q));
    support.sort_unstable();
    support.dedup();
    let candidates = quadratic_discriminants(&support, false);
    let primes = ctx.good_primes(bound);
    let kills = par::map(&candidates, |&d| {
        primes.iter().copied().find(|&p| {
            kronecker_symbol(d, p as i64) == -1 && !ctx.abar(p).expect("stored").is_zero()
        })
    });
    let mut witnesses = Vec::new();
    let mut fields = Vec::new();
    for (&d, kill) in candidates.iter().zip(kills) {
        match kill {
            Some(p) => witnesses.push((d, p)),
            None => fields.push(d),
        }
    }
    Ok(if fields.is_empty() {
        DihedralOutcome::NonDihedral { witnesses }
    } else {
        DihedralOutcome::Consistent { fields }
    })
}

/// `φ₁ = ψ·ω^a` with `ψ` a character of `(Z/N'Z)^×` (`N'` the prime-to-`ℓ`
/// part of `N`) valued in `F_{Λ}(√c)^×` and `ω` the Teichmüller character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterPair {
    pub modulus: u64,
    /// `(generator of (Z/N'Z)^×, exponent k)`: `ψ(g) = γ^k` for the fixed
    /// primitive element `γ` of the quadratic extension.
    pub psi: Vec<(u64, u128)>,
    pub omega_power: u64,
}

impl CharacterPair {
    pub fn psi_is_trivial(&self) -> bool {
        self.psi.iter().all(|&(_, k)| k == 0)
    }
}

impl fmt::Display for CharacterPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let psi = if self.psi_is_trivial() {
            "1".to_string()
        } else {
            let parts: Vec<String> = self.psi.iter().map(|(g, k)| format!("{g}↦γ^{k}")).collect();
            format!("ψ[{}]", parts.join(","))
        };
        write!(f, "φ₁ = {psi}·ω^{}, φ₂ = χ̄·ω^(k−1)/φ₁", self.omega_power)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReducibleOutcome {
    /// A pair with `ā_p = φ₁(p) + φ₂(p)` at every sampled `p`.
    Consistent {
        pair: CharacterPair,
        checked: usize,
    },
    /// Every pair fails. `by_prime` counts the pairs whose first
    /// failure is at each prime; `first` is the pair `ψ = 1, a = 0`.
    Irreducible {
        refuted: u64,
        by_prime: BTreeMap<u64, u64>,
        first: (CharacterPair, u64),
    },
    Inconclusive {
        reason: String,
    },
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// A generator of the cyclic group `E^×` with `E = F[y]/(y² − c)`, from a
/// fixed-seed stream of candidates.
fn primitive_element(alg: &QuadAlgebra, q2: u128, factors: &[(u64, u32)]) -> QuadElem {
    use rand::{Rng, SeedableRng};
    let f = alg.base;
    let ell = f.characteristic();
    let d = f.degree();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ell ^ ((d as u64) << 32));
    loop {
        let mut digits = || {
            (0..d)
                .map(|_| rng.random_range(0..ell))
                .collect::<Vec<u64>>()
        };
        let x = QuadElem {
            a: f.from_coeffs(&digits()),
            b: f.from_coeffs(&digits()),
        };
        if alg.order_dividing(&x, q2 - 1, factors) == Some(q2 - 1) {
            return x;
        }
    }
}

fn nonsquare(f: &FiniteField) -> FfElem {
    let ell = f.characteristic();
    let d = f.degree();
    (1u64..)
        .map(|n| {
            let mut digits = Vec::with_capacity(d);
            let mut m = n;
            for _ in 0..d {
                digits.push(m % ell);
                m /= ell;
            }
            f.from_coeffs(&digits)
        })
        .find(|x| !f.is_square(x))
        .expect("odd characteristic has nonsquares")
}

/// Exponents of a unit in the canonical generators of `(Z/mZ)^×`, each
/// only modulo a chosen divisor `h_i` of the generator's order.
struct TruncatedLogs {
    parts: Vec<LogPart>,
}

struct LogPart {
    modulus: u64,
    /// `−1` in the 2-part: the exponent is read off `p mod 4`.
    sign: bool,
    /// For `5` in the 2-part, `p` is first multiplied by `±1` to be `1 mod 4`.
    after_sign: bool,
    cofactor: u64,
    table: HashMap<u64, u64>,
}

impl TruncatedLogs {
    fn new(m: u64, gens: &[(u64, u64)], h: &[u64]) -> Self {
        let mut parts = Vec::new();
        let mut k = 0;
        for (p, e) in factorize(m) {
            let pe = p.pow(e);
            let mut push = |sign: bool, after_sign: bool, k: usize| {
                let (g, o) = gens[k];
                let cofactor = o / h[k];
                let base = pow_mod(g % pe, cofactor, pe);
                let mut table = HashMap::new();
                let mut x = 1 % pe;
                for j in 0..h[k] {
                    table.insert(x, j);
                    x = ((x as u128 * base as u128) % pe as u128) as u64;
                }
                parts.push(LogPart {
                    modulus: pe,
                    sign,
                    after_sign,
                    cofactor,
                    table,
                });
            };
            if p == 2 {
                if e >= 2 {
                    push(true, false, k);
                    k += 1;
                }
                if e >= 3 {
                    push(false, true, k);
                    k += 1;
                }
            } else {
                push(false, false, k);
                k += 1;
            }
        }
        TruncatedLogs { parts }
    }

    fn logs(&self, n: u64) -> Vec<u64> {
        self.parts
            .iter()
            .map(|part| {
                let r = n % part.modulus;
                if part.sign {
                    return u64::from(r % 4 == 3);
                }
                let r = if part.after_sign && r % 4 == 3 {
                    part.modulus - r
                } else {
                    r
                };
                let x = pow_mod(r, part.cofactor, part.modulus);
                *part.table.get(&x).expect("unit lies in the cyclic group")
            })
            .collect()
    }
}

/// Search for characters `φ₁, φ₂` of conductor dividing `Nℓ` with
/// `φ₁φ₂ = χ̄·ω^{k−1}` and `ā_p = φ₁(p) + φ₂(p)` for all sampled `p`.
///
/// `ā_p` lies in `F_Λ`, so `φ₁(p)` is a root of a quadratic over `F_Λ` and
/// `ψ` takes values in `F_Λ(√c)^×`; only characters of that shape are
/// enumerated.
pub fn reducible_test(ctx: &ReductionContext, bound: u64) -> Result<ReducibleOutcome, GaloisError> {
    check_sample(ctx, bound)?;
    let ell = ctx.ell();
    let level = ctx.form.level;
    let n_prime = level / ell.pow(valuation(level, ell));
    let f = &ctx.residue;
    let e = 2 * f.degree() as u32;
    let inconclusive = |reason: String| Ok(ReducibleOutcome::Inconclusive { reason });
    let Some(q2) = (ell as u128).checked_pow(e) else {
        return inconclusive(format!("{ell}^{e} does not fit in 128 bits"));
    };
    let Some(factors) = factor_prime_power_minus_one(ell, e) else {
        return inconclusive(format!("cannot factor {ell}^{e} − 1"));
    };
    let gens = unit_generators(n_prime);
    // ψ(g_i) = γ^{j·(Q−1)/h_i}, j < h_i = gcd(o_i, Q−1)
    let h: Vec<u64> = gens
        .iter()
        .map(|&(_, o)| gcd_u128(o as u128, q2 - 1) as u64)
        .collect();
    let candidates = h
        .iter()
        .try_fold(ell as u128 - 1, |acc, &x| acc.checked_mul(x as u128))
        .unwrap_or(u128::MAX);
    if candidates > REDUCIBLE_CANDIDATE_CAP as u128 {
        return inconclusive(format!(
            "{candidates} candidate pairs exceed the cap {REDUCIBLE_CANDIDATE_CAP}"
        ));
    }
    let alg = QuadAlgebra::new(f, f.zero(), nonsquare(f));
    let gamma = primitive_element(&alg, q2, &factors);
    let logs = TruncatedLogs::new(n_prime, &gens, &h);
    // powers[i][k] = γ^{k·(Q−1)/h_i}
    let powers: Vec<Vec<QuadElem>> = h
        .iter()
        .map(|&hi| {
            let base = alg.pow(&gamma, (q2 - 1) / hi as u128);
            let mut row = vec![alg.one()];
            for _ in 1..hi {
                row.push(alg.mul(row.last().expect("nonempty"), &base));
            }
            row
        })
        .collect();
    let primes = ctx.good_primes(bound);
    let mut data = Vec::with_capacity(primes.len());
    for &p in &primes {
        let abar = ctx.abar(p).ok_or(GaloisError::MissingCoefficient(p))?;
        let det = ctx.det_bar(p)?;
        data.push((
            p,
            alg.scalar(f.neg(abar)),
            alg.scalar(det),
            logs.logs(p),
            p % ell,
        ));
    }
    let radix = ell - 1;
    // candidate index = a + (ℓ−1)·(j_0 + h_0·(j_1 + …))
    let decode = |mut idx: u64| -> (Vec<u64>, u64) {
        let a = idx % radix;
        idx /= radix;
        let js = h
            .iter()
            .map(|&hi| {
                let j = idx % hi;
                idx /= hi;
                j
            })
            .collect();
        (js, a)
    };
    let refute = |idx: u64| -> Option<u64> {
        let (js, a) = decode(idx);
        for (p, minus_abar, det, logs_p, pmod) in &data {
            let psi_p = js
                .iter()
                .zip(logs_p)
                .zip(h.iter().zip(&powers))
                .fold(alg.one(), |acc, ((&j, &l), (&hi, row))| {
                    alg.mul(&acc, &row[(j * l % hi) as usize])
                });
            let omega_p = alg.scalar(f.from_u64(pow_mod(*pmod, a, ell)));
            let phi1 = alg.mul(&psi_p, &omega_p);
            // φ₁ + det/φ₁ = ā  ⇔  φ₁² − ā·φ₁ + det = 0
            let value = alg.add(&alg.mul(&phi1, &alg.add(&phi1, minus_abar)), det);
            if value != alg.scalar(f.zero()) {
                return Some(*p);
            }
        }
        None
    };
    let chunks = par::chunks(0, candidates as u64 - 1, 4096);
    let results: Vec<Vec<Option<u64>>> =
        par::map(&chunks, |&(lo, hi)| (lo..=hi).map(&refute).collect());
    let describe = |idx: u64| {
        let (js, a) = decode(idx);
        CharacterPair {
            modulus: n_prime,
            psi: gens
                .iter()
                .zip(js.iter().zip(&h))
                .map(|(&(g, _), (&j, &hi))| (g, j as u128 * ((q2 - 1) / hi as u128)))
                .collect(),
            omega_power: a,
        }
    };
    let mut by_prime: BTreeMap<u64, u64> = BTreeMap::new();
    for (idx, r) in results.into_iter().flatten().enumerate() {
        match r {
            None => {
                return Ok(ReducibleOutcome::Consistent {
                    pair: describe(idx as u64),
                    checked: primes.len(),
                })
            }
            Some(p) => *by_prime.entry(p).or_default() += 1,
        }
    }
    let first = refute(0).expect("every candidate was refuted");
    Ok(ReducibleOutcome::Irreducible {
        refuted: candidates as u64,
        by_prime,
        first: (describe(0), first),
    })
}

/// Frobenius elements whose projective orders fit none of `A₄`, `S₄`, `A₅`:
/// one of order above 5, or else one of order 4 together with one of
/// order 5 (element orders there are {1,2,3}, {1,2,3,4}, {1,2,3,5}).
/// Empty when the sample is consistent with an exceptional image.
pub fn exceptional_witness(
    ctx: &ReductionContext,
    bound: u64,
) -> Result<Vec<Witness>, GaloisError> {
    check_sample(ctx, bound)?;
    let mut four: Option<Witness> = None;
    let mut five: Option<Witness> = None;
    for p in ctx.good_primes(bound) {
        let u = u_invariant(ctx, p)?;
        let order = projective_order_from_u(&ctx.residue, &u);
        let witness = |role: &str| Witness {
            p,
            quantity: format!("u = {u}, projective order {order}"),
            role: role.to_string(),
        };
        if order == ProjectiveOrder::AboveFive {
            return Ok(vec![witness("order above 5 excludes A4, S4, A5")]);
        }
        let Some(n) = order.exact() else {
            continue;
        };
        match n {
            n if n > 5 => return Ok(vec![witness("order above 5 excludes A4, S4, A5")]),
            4 if four.is_none() => four = Some(witness("order 4 excludes A4, A5")),
            5 if five.is_none() => five = Some(witness("order 5 excludes A4, S4")),
            _ => {}
        }
    }
    Ok(match (four, five) {
        (Some(a), Some(b)) => vec![a, b],
        _ => Vec::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProjectiveGroup {
    Psl,
    Pgl,
}

impl fmt::Display for ProjectiveGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectiveGroup::Psl => "PSL",
            ProjectiveGroup::Pgl => "PGL",
        })
    }
}

/// PSL iff every `(k−1)`-th power in `F_ℓ^×` is a square in `F_{ℓ^{d_λ}}`,
/// i.e. iff `(k−1)·d_λ` is even.
pub fn psl_or_pgl(
    k: u32,
    ell: u64,
    d_lambda: usize,
    twist_trivial: bool,
) -> Result<ProjectiveGroup, GaloisError> {
    if !twist_trivial {
        return Err(GaloisError::TwistsPresent);
    }
    if ell == 2 || !is_prime(ell) {
        return Err(GaloisError::Precondition(format!(
            "ℓ = {ell} must be an odd prime"
        )));
    }
    Ok(if ((k as u64 - 1) * d_lambda as u64) % 2 == 0 {
        ProjectiveGroup::Psl
    } else {
        ProjectiveGroup::Pgl
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum ImageStatus {
    LargePSL { ell: u64, degree: usize },
    LargePGL { ell: u64, degree: usize },
    ReducibleConsistent { pair: String },
    DihedralConsistent { fields: Vec<i64> },
    ExceptionalA4S4A5Consistent,
    Inconclusive { reason: String },
}

impl ImageStatus {
    pub fn is_large(&self) -> bool {
        matches!(
            self,
            ImageStatus::LargePSL { .. } | ImageStatus::LargePGL { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            ImageStatus::LargePSL { .. } => "LargePSL",
            ImageStatus::LargePGL { .. } => "LargePGL",
            ImageStatus::ReducibleConsistent { .. } => "ReducibleConsistent",
            ImageStatus::DihedralConsistent { .. } => "DihedralConsistent",
            ImageStatus::ExceptionalA4S4A5Consistent => "ExceptionalA4S4A5Consistent",
            ImageStatus::Inconclusive { .. } => "Inconclusive",
        }
    }
}

impl fmt::Display for ImageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageStatus::LargePSL { ell, degree } => write!(f, "LargePSL(F_{ell}^{degree})"),
            ImageStatus::LargePGL { ell, degree } => write!(f, "LargePGL(F_{ell}^{degree})"),
            ImageStatus::ReducibleConsistent { pair } => write!(f, "ReducibleConsistent({pair})"),
            ImageStatus::DihedralConsistent { fields } => {
                let names: Vec<String> = fields.iter().map(|d| format!("Q(√{d})")).collect();
                write!(f, "DihedralConsistent({})", names.join(", "))
            }
            ImageStatus::ExceptionalA4S4A5Consistent => f.write_str("ExceptionalA4S4A5Consistent"),
            ImageStatus::Inconclusive { reason } => write!(f, "Inconclusive({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageClassification {
    pub label: String,
    pub ell: u64,
    pub slot: String,
    pub residue_degree: usize,
    pub lambda_degree: Option<usize>,
    pub status: ImageStatus,
    pub witnesses: Vec<Witness>,
    pub sample_bound: u64,
    pub caveats: Vec<String>,
}

/// Determinant values at generators of `(Z/N'ℓZ)^×` all squares in `F_λ`.
fn determinant_is_square(ctx: &ReductionContext, d_lambda: usize) -> Result<bool, GaloisError> {
    let ell = ctx.ell();
    let n_prime = ctx.form.level / ell.pow(valuation(ctx.form.level, ell));
    let m = n_prime * ell;
    let f = &ctx.residue;
    let q_lambda = (ell as u128).pow(d_lambda as u32);
    for (g, _) in unit_generators(m) {
        // a prime in the class of g mod m, so det_bar applies
        let p = (0u64..)
            .map(|t| g + t * m)
            .find(|&p| is_prime(p) && ctx.form.level % p != 0)
            .expect("Dirichlet");
        let det = ctx.det_bar(p)?;
        if !f.in_subfield(&det, d_lambda) || !f.pow(&det, (q_lambda - 1) / 2).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Combine the reducibility, dihedral and exceptional-order tests.
pub fn classify_image(
    ctx: &ReductionContext,
    bound: u64,
    twists: Option<&InnerTwistReport>,
) -> Result<ImageClassification, GaloisError> {
    check_sample(ctx, bound)?;
    let owned;
    let twists = match twists {
        Some(t) => t,
        None => {
            owned = detect_inner_twists(&ctx.form, bound)?;
            &owned
        }
    };
    let ctx = match &ctx.lambda {
        Some(_) => ctx.clone(),
        None => ctx.clone().with_twist_field(&twists.twist_field)?,
    };
    let mut out = ImageClassification {
        label: ctx.form.label.clone(),
        ell: ctx.ell(),
        slot: ctx.slot.describe(),
        residue_degree: ctx.degree(),
        lambda_degree: ctx.lambda_degree(),
        status: ImageStatus::ExceptionalA4S4A5Consistent,
        witnesses: Vec::new(),
        sample_bound: bound,
        caveats: Vec::new(),
    };
    if is_small_prime(&ctx.form, ctx.ell()) {
        out.caveats.push(format!(
            "ℓ = {} is small (ℓ ≤ k+1 or ℓ | N·disc); the big-image theorem need not apply",
            ctx.ell()
        ));
    }
    if !ctx.slot.dedekind_valid {
        out.caveats
            .push("ℓ divides the polynomial discriminant of Q_f".into());
    }
    match reducible_test(&ctx, bound)? {
        ReducibleOutcome::Consistent { pair, checked } => {
            out.status = ImageStatus::ReducibleConsistent {
                pair: pair.to_string(),
            };
            out.caveats.push(format!(
                "ā_p = φ₁(p) + φ₂(p) at all {checked} sampled primes"
            ));
            return Ok(out);
        }
        ReducibleOutcome::Inconclusive { reason } => {
            out.status = ImageStatus::Inconclusive { reason };
            return Ok(out);
        }
        ReducibleOutcome::Irreducible { refuted, first, .. } => {
            let (pair, p) = &first;
            out.witnesses.push(Witness {
                p: *p,
                quantity: format!("ā_{p} = {}", ctx.abar(*p).expect("stored")),
                role: format!(
                    "irreducibility: refutes {pair}; all {refuted} candidate pairs refuted"
                ),
            });
        }
    }
    match dihedral_test(&ctx, bound)? {
        DihedralOutcome::Consistent { fields } => {
            out.status = ImageStatus::DihedralConsistent { fields };
            return Ok(out);
        }
        DihedralOutcome::NonDihedral { witnesses } => {
            for (d, p) in witnesses {
                out.witnesses.push(Witness {
                    p,
                    quantity: format!("η_{d}({p}) = −1, ā_{p} ≠ 0"),
                    role: format!("non-dihedral for Q(√{d})"),
                });
            }
        }
    }
    let exceptional = exceptional_witness(&ctx, bound)?;
    if exceptional.is_empty() {
        return Ok(out);
    }
    out.witnesses.extend(exceptional);
    if !twists.is_trivial() {
        out.status = ImageStatus::Inconclusive {
            reason: "nontrivial inner twists: the image statement holds over K_Γ only".into(),
        };
        return Ok(out);
    }
    let d_lambda = ctx.lambda_degree().expect("attached above");
    let group = if ctx.form.nebentypus.is_trivial() {
        psl_or_pgl(ctx.form.weight, ctx.ell(), d_lambda, true)?
    } else if determinant_is_square(&ctx, d_lambda)? {
        ProjectiveGroup::Psl
    } else {
        ProjectiveGroup::Pgl
    };
    out.status = match group {
        ProjectiveGroup::Psl => ImageStatus::LargePSL {
            ell: ctx.ell(),
            degree: d_lambda,
        },
        ProjectiveGroup::Pgl => ImageStatus::LargePGL {
            ell: ctx.ell(),
            degree: d_lambda,
        },
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newform_data::fixtures;
    use std::sync::Arc;

    fn ctx(label: &str, ell: u64) -> ReductionContext {
        let f = Arc::new(fixtures::load(label).unwrap());
        ReductionContext::all_above(f, ell).unwrap().remove(0)
    }

    #[test]
    fn level11_examples() {
        let c5 = ctx("11a", 5);
        match reducible_test(&c5, 1000).unwrap() {
            ReducibleOutcome::Consistent { pair, .. } => {
                assert!(pair.psi_is_trivial());
                assert_eq!(pair.omega_power, 0);
            }
            other => panic!("{other:?}"),
        }
        let c7 = ctx("11a", 7);
        match reducible_test(&c7, 1000).unwrap() {
            ReducibleOutcome::Irreducible {
                refuted,
                by_prime,
                first: (pair, p),
            } => {
                assert!(pair.psi_is_trivial() && pair.omega_power == 0 && p == 2);
                assert_eq!(by_prime.values().sum::<u64>(), refuted);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            dihedral_test(&c7, 100).unwrap(),
            DihedralOutcome::NonDihedral { .. }
        ));
        assert!(dihedral_test(&c7, 100_000).is_err());
        let r = classify_image(&c7, 1000, None).unwrap();
        assert_eq!(r.status, ImageStatus::LargePGL { ell: 7, degree: 1 });
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.p == 3 && w.quantity.contains("order 8")));
        let r5 = classify_image(&c5, 1000, None).unwrap();
        assert_eq!(r5.status.name(), "ReducibleConsistent");
    }

    #[test]
    fn truncated_logs_reconstruct_units() {
        for m in [5u64, 8, 12, 16, 45, 63, 80, 388, 1000] {
            let gens = unit_generators(m);
            let full: Vec<u64> = gens.iter().map(|&(_, o)| o).collect();
            let halves: Vec<u64> = full
                .iter()
                .map(|&o| if o % 2 == 0 { 2 } else { 1 })
                .collect();
            let exact = TruncatedLogs::new(m, &gens, &full);
            let coarse = TruncatedLogs::new(m, &gens, &halves);
            for n in (1..m).filter(|&n| crate::algebra::arith::gcd(n, m) == 1) {
                let l = exact.logs(n);
                let back = gens
                    .iter()
                    .zip(&l)
                    .fold(1u64, |acc, (&(g, _), &k)| acc * pow_mod(g, k, m) % m);
                assert_eq!(back, n % m, "m={m} n={n}");
                let c = coarse.logs(n);
                for i in 0..l.len() {
                    assert_eq!(c[i], l[i] % halves[i]);
                }
            }
        }
    }

    #[test]
    fn psl_pgl_rule() {
        assert_eq!(psl_or_pgl(2, 7, 2, true).unwrap(), ProjectiveGroup::Psl);
        assert_eq!(psl_or_pgl(2, 7, 1, true).unwrap(), ProjectiveGroup::Pgl);
        assert_eq!(psl_or_pgl(3, 13, 1, true).unwrap(), ProjectiveGroup::Psl);
        assert!(psl_or_pgl(2, 7, 1, false).is_err());
        assert!(psl_or_pgl(2, 2, 1, true).is_err());
    }

    #[test]
    fn quadratic_fixture_at_inert_prime() {
        // 7 is inert in Q(√5)
        let c = ctx("23a", 7);
        assert_eq!(c.degree(), 2);
        let r = classify_image(&c, 1000, None).unwrap();
        assert_eq!(r.status, ImageStatus::LargePSL { ell: 7, degree: 2 });
    }
}
