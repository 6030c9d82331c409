//! Invariant suites shared by the property tests and the acceptance run.
//! Each returns `Err` with a description of the first counterexample.

#![allow(dead_code)]

use std::sync::Arc;

use galrep::algebra::arith::{gcd, is_prime};
use galrep::algebra::{factor_poly_mod_ell, FiniteField, GfPoly, NfElem, PolyInt};
use galrep::galois_image::{
    detect_inner_twists, projective_order_from_u, reduce_mod_lambda, ProjectiveOrder,
    ReductionContext,
};
use galrep::groups::kronecker_symbol;
use galrep::newform_data::{fixtures, twist_eigenvalues, DirichletCharacter, Eigenform};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Runner with a fixed seed so every run sees the same cases.
pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

pub fn load(name: &str) -> Arc<Eigenform> {
    Arc::new(fixtures::load(name).expect("embedded fixture"))
}

/// A field element with small numerators and denominators prime to `ell`.
fn element(f: &Eigenform, ell: u64) -> impl Strategy<Value = NfElem> + '_ {
    let d = f.field.degree();
    prop::collection::vec((-30i64..30, 1i64..12), d).prop_map(move |cs| {
        let coords = cs
            .into_iter()
            .map(|(n, den)| {
                let den = if den as u64 % ell == 0 { den + 1 } else { den };
                BigRational::new(BigInt::from(n), BigInt::from(den))
            })
            .collect();
        f.field.from_coords(coords).expect("right length")
    })
}

/// Reduction mod Λ is a ring homomorphism on `pairs` random pairs for
/// every slot above each `ell`.
pub fn reduction_homomorphism(label: &str, ells: &[u64], pairs: u32) -> Result<usize, String> {
    let f = load(label);
    let mut contexts = 0;
    for &ell in ells {
        for ctx in ReductionContext::all_above(f.clone(), ell).map_err(|e| e.to_string())? {
            contexts += 1;
            let k = &f.field;
            let r = &ctx.residue;
            runner(pairs)
                .run(&(element(&f, ell), element(&f, ell)), |(a, b)| {
                    let red = |x: &NfElem| reduce_mod_lambda(&ctx, x).unwrap();
                    prop_assert_eq!(red(&k.add(&a, &b)), r.add(&red(&a), &red(&b)));
                    prop_assert_eq!(red(&k.mul(&a, &b)), r.mul(&red(&a), &red(&b)));
                    prop_assert!(red(&k.one()).is_one());
                    Ok(())
                })
                .map_err(|e| format!("{label} at {}: {e}", ctx.describe()))?;
        }
    }
    Ok(contexts)
}

const DISCRIMINANTS: [i64; 12] = [-3, -4, 5, -7, 8, -8, -11, 12, 13, -15, 17, -20];

/// Twisting twice by a quadratic character gives back `a_p` away from its
/// conductor.
pub fn twist_involution(labels: &[&str], cases: u32) -> Result<(), String> {
    for label in labels {
        let f = load(label);
        runner(cases)
            .run(&prop::sample::select(DISCRIMINANTS.to_vec()), |d| {
                let eps = DirichletCharacter::kronecker(d).unwrap();
                let once = twist_eigenvalues(&f, &eps).unwrap();
                for (&p, a) in f.ap.iter().take(200) {
                    let s = kronecker_symbol(d, p as i64) as i64;
                    let twice = f
                        .field
                        .scale(&once[&p], &BigRational::from_integer(s.into()));
                    if d.unsigned_abs() % p == 0 {
                        prop_assert!(twice.is_zero());
                    } else {
                        prop_assert_eq!(&twice, a, "p = {}", p);
                    }
                }
                Ok(())
            })
            .map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(())
}

/// Every reported pair satisfies `a_p ε(p) = σ(a_p)` and `χ ε² = σ(χ)`,
/// and `Γ` is an elementary abelian 2-group when `χ` is real.
pub fn reported_twists_are_consistent(labels: &[&str]) -> Result<usize, String> {
    let mut pairs = 0;
    for label in labels {
        let f = load(label);
        let k = &f.field;
        let rep = detect_inner_twists(&f, f.bound.min(2000)).map_err(|e| e.to_string())?;
        for pair in &rep.pairs {
            pairs += 1;
            let vals = pair.epsilon.values_in(k).map_err(|e| e.to_string())?;
            let cond = pair.epsilon.conductor();
            for p in f.good_primes(1000) {
                if cond % p == 0 {
                    continue;
                }
                let e = vals.value(p as i64);
                let lhs = k.mul(&f.chi(p), &k.mul(&e, &e));
                let rhs = pair.sigma.apply(k, &f.chi(p));
                if lhs != rhs {
                    return Err(format!("{label}: χε² ≠ σ(χ) at {p}"));
                }
                if k.mul(&f.ap[&p], &e) != pair.sigma.apply(k, &f.ap[&p]) {
                    return Err(format!("{label}: a_p ε(p) ≠ σ(a_p) at {p}"));
                }
            }
        }
        if f.nebentypus.is_real() {
            for s in &rep.gamma {
                if !s.compose(k, s).is_identity(k) {
                    return Err(format!("{label}: an element of Γ has order > 2"));
                }
                for t in &rep.gamma {
                    if s.compose(k, t) != t.compose(k, s) {
                        return Err(format!("{label}: Γ is not abelian"));
                    }
                }
            }
            if !rep.gamma.len().is_power_of_two() {
                return Err(format!("{label}: |Γ| = {}", rep.gamma.len()));
            }
        }
    }
    Ok(pairs)
}

fn product(p: u64, fs: &[(GfPoly, u32)]) -> GfPoly {
    fs.iter().fold(GfPoly::one(p), |acc, (g, m)| {
        (0..*m).fold(acc, |a, _| a.mul(g))
    })
}

/// Factorization mod ℓ multiplies back to the monic input, with
/// irreducible monic factors.
pub fn factorization_round_trip(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::sample::select(vec![2u64, 3, 5, 7, 13, 101]),
        prop::collection::vec(-50i64..50, 1..=12),
    );
    runner(cases)
        .run(&strategy, |(ell, coeffs)| {
            let f = PolyInt::from_i64(&coeffs);
            let fp = f.mod_p(ell);
            if fp.is_zero() {
                return Ok(());
            }
            let factors = factor_poly_mod_ell(&f, ell).unwrap();
            prop_assert_eq!(product(ell, &factors), fp.monic());
            for (g, _) in &factors {
                prop_assert!(g.is_irreducible());
                prop_assert_eq!(g.leading(), 1);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Order of `g` in `PGL₂(F_p)` by repeated multiplication.
fn pgl_order(p: u64, g: [u64; 4]) -> u64 {
    let mul = |a: [u64; 4], b: [u64; 4]| {
        [
            (a[0] * b[0] + a[1] * b[2]) % p,
            (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p,
            (a[2] * b[1] + a[3] * b[3]) % p,
        ]
    };
    let mut h = g;
    for k in 1.. {
        if h[1] == 0 && h[2] == 0 && h[0] == h[3] {
            return k;
        }
        h = mul(h, g);
    }
    unreachable!()
}

/// Compare the u-invariant classifier with matrix powers over all of
/// `GL₂(F_p)`. Returns the number of matrices checked.
pub fn gl2_projective_orders(p: u64) -> Result<usize, String> {
    assert!(is_prime(p));
    let field = FiniteField::prime_field(p).unwrap();
    let mut count = 0;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = (a * d + p * p - b * c) % p;
                    if det == 0 {
                        continue;
                    }
                    count += 1;
                    let tr = (a + d) % p;
                    let u = field
                        .div(&field.from_u64(tr * tr % p), &field.from_u64(det))
                        .unwrap();
                    let expected = pgl_order(p, [a, b, c, d]);
                    let ok = match projective_order_from_u(&field, &u) {
                        ProjectiveOrder::Exact { order } => order == expected as u128,
                        ProjectiveOrder::ScalarOrUnipotent { ell } => {
                            ell == p && (expected == 1 || expected == p)
                        }
                        ProjectiveOrder::AboveFive => expected > 5,
                    };
                    if !ok {
                        return Err(format!(
                            "[[{a},{b}],[{c},{d}]] mod {p}: matrix order {expected}, u = {u}"
                        ));
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Multiplicative order of `a` mod `m` by brute force.
pub fn order_mod(a: u64, m: u64) -> u64 {
    assert_eq!(gcd(a, m), 1);
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

/// `(a|p)` for odd prime `p` by Euler's criterion.
pub fn euler_legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u128;
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut acc) = (a, (p as u128 - 1) / 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}
