//! Load-time sanity checks on eigenvalue tables: the Ramanujan–Petersson
//! bound and reality of `a_p²/χ(p)` under every complex embedding.
//!
//! This is the only place floating point is used. Embeddings come from
//! Aberth iteration on the defining polynomial; values are compared with an
//! absolute tolerance of [`TOLERANCE`].

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::eigenform::Eigenform;
use crate::algebra::{NfElem, PolyInt};

pub const TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub p: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub bound: u64,
    pub primes_checked: usize,
    pub embeddings: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Complex roots of an integer polynomial (Aberth–Ehrlich iteration
/// followed by Newton polishing).
pub fn complex_roots(poly: &PolyInt) -> Vec<Complex64> {
    let coeffs: Vec<f64> = poly
        .coeffs()
        .iter()
        .map(|c| c.to_f64().expect("finite coefficient"))
        .collect();
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let c: Vec<f64> = coeffs.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for &a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    // Cauchy bound for the starting circle
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

/// Image of a field element under the embedding sending the generator to
/// `root`.
pub fn embed(a: &NfElem, root: Complex64) -> Complex64 {
    a.coords().iter().rev().fold(Complex64::zero(), |acc, c| {
        acc * root + c.to_f64().expect("finite coordinate")
    })
}

/// Check the stored eigenvalues against the Ramanujan–Petersson bound and
/// the reality of `a_p²/χ(p)` (for trivial nebentypus: reality of `a_p`).
pub fn validate(f: &Eigenform) -> ValidationReport {
    let roots = complex_roots(f.field.poly());
    let mut violations = Vec::new();
    let mut checked = 0;
    for (&p, a) in &f.ap {
        if f.level % p == 0 {
            continue;
        }
        checked += 1;
        let scale = (p as f64).powf((f.weight as f64 - 1.0) / 2.0);
        let limit = 2.0 * scale;
        let exceeded = match a.as_rational() {
            // exact: a² <= 4 p^(k-1)
            Some(r) => {
                let lhs = &r * &r;
                let rhs = num_rational::BigRational::from_integer(
                    num_bigint::BigInt::from(4) * num_bigint::BigInt::from(p).pow(f.weight - 1),
                );
                (lhs > rhs)
                    .then(|| format!("|a_{p}| = {} > 2·{p}^{}", r.abs(), fmt_half(f.weight - 1)))
            }
            None => roots.iter().find_map(|&z| {
                let v = embed(a, z).norm();
                (v > limit + TOLERANCE)
                    .then(|| format!("|ι(a_{p})| = {v:.6} > {limit:.6} at ι(x) = {z:.6}"))
            }),
        };
        if let Some(detail) = exceeded {
            violations.push(Violation {
                p,
                check: format!("Hasse bound at p={p}"),
                detail,
            });
        }
        let chi = f.chi(p);
        let twisted = f
            .field
            .div(&f.field.mul(a, a), &chi)
            .expect("character values are units");
        if twisted.as_rational().is_none() {
            for &z in &roots {
                let v = embed(&twisted, z);
                if v.im.abs() > TOLERANCE * v.norm().max(1.0) {
                    violations.push(Violation {
                        p,
                        check: format!("a_p^2/chi(p) real at p={p}"),
                        detail: format!("imaginary part {:.3e} at ι(x) = {z:.6}", v.im),
                    });
                    break;
                }
            }
        }
    }
    ValidationReport {
        label: f.label.clone(),
        bound: f.bound,
        primes_checked: checked,
        embeddings: roots.len(),
        violations,
    }
}

fn fmt_half(k_minus_1: u32) -> String {
    if k_minus_1 % 2 == 0 {
        format!("{}", k_minus_1 / 2)
    } else {
        format!("({k_minus_1}/2)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_polynomials() {
        let r = complex_roots(&PolyInt::from_i64(&[-1, -1, 1]));
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((re[1] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let cyc = complex_roots(&PolyInt::from_i64(&[1, 1, 1, 1, 1]));
        assert!(cyc.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let x = complex_roots(&PolyInt::x());
        assert!(x[0].norm() < 1e-12);
    }
}
