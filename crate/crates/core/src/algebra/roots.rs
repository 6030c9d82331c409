//! Roots of rational polynomials inside a number field, by Trager's norm
//! method: factor the norm of a shifted polynomial over Q and recover the
//! linear factors over the field with gcds in K[x].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::arith::{euler_phi, is_prime};
use super::cyclotomic::real_cyclotomic_minpoly;
use super::finite_field::{FfElem, FiniteField};
use super::gfpoly::{self, GfPoly};
use super::number_field::{NfElem, NumberField};
use super::poly::{interpolate, rational_reconstruction, resultant, PolyInt, QPoly};
use super::zassenhaus;
use super::AlgebraError;

/// Largest field degree accepted by root finding and subfield searches.
pub const DEGREE_CAP: usize = 16;

pub fn check_degree_cap(field: &NumberField) -> Result<(), AlgebraError> {
    if field.degree() > DEGREE_CAP {
        return Err(AlgebraError::DegreeCap {
            degree: field.degree(),
            cap: DEGREE_CAP,
        });
    }
    Ok(())
}

/// Polynomial over a number field, constant term first.
type KPoly = Vec<NfElem>;

fn kpoly_trim(mut p: KPoly) -> KPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Primes used by the multi-modular gcd, descending from just below 2^62.
fn modular_primes() -> impl Iterator<Item = u64> {
    let mut p = (1u64 << 62) - 57;
    std::iter::from_fn(move || {
        while !is_prime(p) {
            p -= 2;
        }
        let out = p;
        p -= 2;
        Some(out)
    })
}

/// Image of an integral element in `F_p[x]/(m)`.
fn reduce_integral(a: &NfElem, p: u64) -> GfPoly {
    let m = BigInt::from(p);
    GfPoly::new(
        p,
        a.coords()
            .iter()
            .map(|c| c.numer().mod_floor(&m).to_u64().expect("reduced"))
            .collect(),
    )
}

/// The root `gamma` of the linear gcd of `big` (over K, integral
/// coefficients) and `small` (over Z), recovered prime by prime and
/// certified exactly. `None` when the gcd is not linear.
fn linear_gcd_root(
    k: &NumberField,
    big: &KPoly,
    small: &PolyInt,
) -> Result<Option<NfElem>, AlgebraError> {
    let n = k.degree();
    let lead_big = big.last().expect("nonzero").clone();
    let small_q = small.to_qpoly();
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut good = 0;
    for (tried, p) in modular_primes().enumerate() {
        if tried > 64 + 4 * good {
            return Ok(None);
        }
        let pb = BigInt::from(p);
        if (small.leading() % &pb).is_zero() {
            continue;
        }
        let mp = k.poly().mod_p(p);
        if !mp.gcd(&mp.derivative()).is_one() {
            continue;
        }
        let lead_p = reduce_integral(&lead_big, p);
        let components = gfpoly::factor(&mp)?;
        let mut pieces = Vec::with_capacity(components.len());
        let mut ok = true;
        for (comp, _) in &components {
            let field = FiniteField::new(comp.clone())?;
            if field.elem(lead_p.clone()).is_zero() {
                ok = false;
                break;
            }
            let a: Vec<FfElem> = big
                .iter()
                .map(|c| field.elem(reduce_integral(c, p)))
                .collect();
            let b: Vec<FfElem> = small
                .mod_p(p)
                .coeffs()
                .iter()
                .map(|&c| field.from_u64(c))
                .collect();
            let g = field.poly_gcd(&a, &b);
            if g.len() != 2 {
                ok = false;
                break;
            }
            pieces.push((comp.clone(), field.neg(&g[0]).value().clone()));
        }
        if !ok {
            continue;
        }
        let gamma_p = crt_polys(&mp, &pieces);
        // combine coordinates with the running modulus
        let inv = BigInt::from(
            super::arith::inv_mod((&modulus % &pb).to_u64().expect("reduced"), p).expect("coprime"),
        );
        for (i, r) in residues.iter_mut().enumerate() {
            let target = BigInt::from(gamma_p.coeff(i));
            let t = ((&target - &*r) * &inv).mod_floor(&pb);
            *r += &modulus * t;
        }
        modulus *= &pb;
        good += 1;
        let coords: Option<Vec<BigRational>> = residues
            .iter()
            .map(|r| rational_reconstruction(r, &modulus))
            .collect();
        if let Some(coords) = coords {
            let gamma = k.from_coords(coords)?;
            if k.eval_poly(&small_q, &gamma).is_zero() && eval_kpoly(k, big, &gamma).is_zero() {
                return Ok(Some(gamma));
            }
        }
    }
    Ok(None)
}

fn eval_kpoly(k: &NumberField, f: &KPoly, a: &NfElem) -> NfElem {
    f.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, a), c))
}

/// Chinese remaindering in `F_p[x]` for pairwise coprime moduli with
/// product `m`.
fn crt_polys(m: &GfPoly, pieces: &[(GfPoly, GfPoly)]) -> GfPoly {
    let p = m.modulus();
    let mut acc = GfPoly::zero(p);
    for (mj, rj) in pieces {
        let cofactor = m.exact_div(mj);
        let (_, s, _) = cofactor.rem(mj).ext_gcd(mj);
        let term = rj.mul_mod(&s, mj).mul(&cofactor);
        acc = acc.add(&term);
    }
    acc.rem(m)
}

/// `h(x - c)` as a polynomial over K.
fn shift(k: &NumberField, h: &QPoly, c: &NfElem) -> KPoly {
    let mut acc: KPoly = Vec::new();
    for coeff in h.coeffs().iter().rev() {
        // acc * (x - c) + coeff
        let mut next = vec![k.zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] = k.add(&next[i + 1], a);
            next[i] = k.sub(&next[i], &k.mul(a, c));
        }
        next[0] = k.add(&next[0], &k.from_rational(coeff.clone()));
        acc = kpoly_trim(next);
    }
    acc
}

/// `Res_y(m(y), h(x - s y))` as a polynomial in `x`.
fn shifted_norm(k: &NumberField, h: &QPoly, s: i64) -> QPoly {
    let degree = k.degree() * h.deg();
    let points: Vec<(BigRational, BigRational)> = (0..=degree as i64)
        .map(|x0| {
            let inner = QPoly::new(vec![
                BigRational::from_integer(BigInt::from(x0)),
                BigRational::from_integer(BigInt::from(-s)),
            ]);
            let hy = h.compose(&inner);
            (
                BigRational::from_integer(BigInt::from(x0)),
                resultant(k.qpoly(), &hy),
            )
        })
        .collect();
    interpolate(&points)
}

fn canonical_elem_cmp(a: &NfElem, b: &NfElem) -> std::cmp::Ordering {
    a.coords().iter().rev().cmp(b.coords().iter().rev())
}

/// Distinct roots in `k` of a nonzero rational polynomial, canonically sorted.
pub fn roots_in_field(k: &NumberField, g: &QPoly) -> Result<Vec<NfElem>, AlgebraError> {
    check_degree_cap(k)?;
    let n = k.degree();
    let mut roots = Vec::new();
    for (h, _) in zassenhaus::factor_over_q(g)? {
        let e = h.deg();
        if e == 1 {
            let r = BigRational::new(-h.coeff(0), h.coeff(1));
            roots.push(k.from_rational(r));
            continue;
        }
        if n % e != 0 {
            continue;
        }
        roots.extend(irreducible_roots(k, &h)?);
    }
    roots.sort_by(canonical_elem_cmp);
    roots.dedup();
    Ok(roots)
}

fn irreducible_roots(k: &NumberField, h: &PolyInt) -> Result<Vec<NfElem>, AlgebraError> {
    let n = k.degree();
    let hq = h.to_qpoly();
    let alpha = k.generator();
    for step in 1..=4 * n as i64 + 8 {
        let s = if step % 2 == 1 {
            step.div_euclid(2) + 1
        } else {
            -(step / 2)
        };
        let norm = shifted_norm(k, &hq, s);
        let norm_int = norm.to_primitive_int();
        if !zassenhaus::probably_squarefree(&norm_int) {
            continue;
        }
        let shift_c = k.scale(&alpha, &BigRational::from_integer(BigInt::from(s)));
        let shifted = shift(k, &hq, &shift_c);
        let mut roots = Vec::new();
        for factor in zassenhaus::factor_squarefree(&norm_int)? {
            if factor.deg() != n {
                continue;
            }
            if let Some(gamma) = linear_gcd_root(k, &shifted, &factor)? {
                // gamma = beta + s*alpha
                let beta = k.sub(&gamma, &shift_c);
                debug_assert!(k.eval_poly(&hq, &beta).is_zero());
                roots.push(beta);
            }
        }
        return Ok(roots);
    }
    Err(AlgebraError::InvalidArgument(
        "no squarefree shifted norm found".to_string(),
    ))
}

/// An automorphism given by the image of the generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub image: NfElem,
}

impl Automorphism {
    pub fn identity(k: &NumberField) -> Self {
        Automorphism {
            image: k.generator(),
        }
    }

    pub fn is_identity(&self, k: &NumberField) -> bool {
        self.image == k.generator()
    }

    pub fn apply(&self, k: &NumberField, a: &NfElem) -> NfElem {
        k.eval_poly(&a.to_qpoly(), &self.image)
    }

    /// `self ∘ other`.
    pub fn compose(&self, k: &NumberField, other: &Automorphism) -> Automorphism {
        Automorphism {
            image: self.apply(k, &other.image),
        }
    }
}

/// All automorphisms, identity first, the rest canonically ordered.
pub fn field_automorphisms(k: &NumberField) -> Result<Vec<Automorphism>, AlgebraError> {
    if k.degree() == 1 {
        return Ok(vec![Automorphism::identity(k)]);
    }
    let id = k.generator();
    let mut out = vec![Automorphism::identity(k)];
    for r in roots_in_field(k, k.qpoly())? {
        if r != id {
            out.push(Automorphism { image: r });
        }
    }
    Ok(out)
}

/// A root of the minimal polynomial of `ζ_n + ζ_n^{-1}` in `f`, if any.
pub fn contains_real_cyclotomic(f: &NumberField, n: u64) -> Result<Option<NfElem>, AlgebraError> {
    let h = (euler_phi(n) / 2).max(1) as usize;
    if n > 2 && f.degree() % h != 0 {
        return Ok(None);
    }
    let target = real_cyclotomic_minpoly(n)?;
    if h == 1 {
        let r = BigRational::new(-target.coeff(0), target.coeff(1));
        return Ok(Some(f.from_rational(r)));
    }
    Ok(roots_in_field(f, &target.to_qpoly())?.into_iter().next())
}

pub fn is_root(k: &NumberField, g: &QPoly, a: &NfElem) -> bool {
    k.eval_poly(g, a).is_zero()
}
