//! The weight-2 newform of level 23 from theta series.
//!
//! The two reduced binary quadratic forms of discriminant −23,
//! `x² + xy + 6y²` and `2x² + xy + 3y²`, have theta series in
//! `M_1(Γ0(23), (−23|·))`; their three pairwise products span
//! `M_2(Γ0(23))`. The matrix of `T_2` on that span is found by exact linear
//! algebra on q-expansions and the newform is a left eigenvector for an
//! eigenvalue `α` with `α² + α − 1 = 0`, so its coefficients live in
//! `Q(√5) = Q[w]/(w² − w − 1)` with `α = w − 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::character::DirichletCharacter;
use super::eigenform::{Eigenform, EigenformError, LocalKind, LocalType};
use crate::algebra::linalg::{rank, solve, Matrix};
use crate::algebra::{NfElem, NumberField};
use crate::primes::primes_up_to;

/// Representation numbers `r_Q(n)`, `n <= bound`, of `Q = ax² + bxy + cy²`
/// (positive definite).
pub fn representation_numbers(a: i64, b: i64, c: i64, bound: usize) -> Vec<i64> {
    let mut r = vec![0i64; bound + 1];
    let disc = 4 * a * c - b * b;
    // 4aQ = (2ax + by)² + disc·y², so |y| <= sqrt(4a·bound/disc)
    let ymax = ((4 * a * bound as i64) as f64 / disc as f64).sqrt() as i64 + 1;
    for y in -ymax..=ymax {
        let rest = 4 * a * bound as i64 - disc * y * y;
        if rest < 0 {
            continue;
        }
        let s = (rest as f64).sqrt() as i64 + 2;
        // 2ax + by ranges over [-s, s]
        let xlo = (-s - b * y).div_euclid(2 * a) - 1;
        let xhi = (s - b * y).div_euclid(2 * a) + 1;
        for x in xlo..=xhi {
            let q = a * x * x + b * x * y + c * y * y;
            if q >= 0 && q as usize <= bound {
                r[q as usize] += 1;
            }
        }
    }
    r
}

fn convolve_at(u: &[i64], v: &[i64], n: usize) -> i64 {
    (0..=n).map(|i| u[i] * v[n - i]).sum()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficients of the three products at the requested indices.
struct ProductBasis {
    t1: Vec<i64>,
    t2: Vec<i64>,
}

impl ProductBasis {
    fn new(bound: usize) -> Self {
        ProductBasis {
            t1: representation_numbers(1, 1, 6, bound),
            t2: representation_numbers(2, 1, 3, bound),
        }
    }

    fn coeff(&self, j: usize, n: usize) -> i64 {
        match j {
            0 => convolve_at(&self.t1, &self.t1, n),
            1 => convolve_at(&self.t1, &self.t2, n),
            _ => convolve_at(&self.t2, &self.t2, n),
        }
    }
}

/// Matrix `M` with `T_2 P_i = Σ_j M[i][j] P_j`, from coefficients `n <= k`.
fn hecke_t2(basis: &ProductBasis, k: usize) -> Result<Matrix, EigenformError> {
    let a: Matrix = (0..=k)
        .map(|n| (0..3).map(|j| rat(basis.coeff(j, n))).collect())
        .collect();
    if rank(&a) != 3 {
        return Err(EigenformError::Header(
            "theta products are dependent".into(),
        ));
    }
    (0..3)
        .map(|i| {
            // weight 2: (T_2 f)(n) = c(2n) + 2 c(n/2)
            let b: Vec<BigRational> = (0..=k)
                .map(|n| {
                    let half = if n % 2 == 0 {
                        2 * basis.coeff(i, n / 2)
                    } else {
                        0
                    };
                    rat(basis.coeff(i, 2 * n) + half)
                })
                .collect();
            solve(&a, &b).ok_or_else(|| EigenformError::Header("span is not T_2-stable".into()))
        })
        .collect()
}

/// Null vector of a rank-2 3×3 matrix over `k`, via cross products of rows.
fn null_vector(k: &NumberField, rows: &[Vec<NfElem>]) -> Option<Vec<NfElem>> {
    let cross = |u: &[NfElem], v: &[NfElem]| -> Vec<NfElem> {
        (0..3)
            .map(|i| {
                let (j, l) = ((i + 1) % 3, (i + 2) % 3);
                k.sub(&k.mul(&u[j], &v[l]), &k.mul(&u[l], &v[j]))
            })
            .collect()
    };
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| cross(&rows[a], &rows[b]))
        .find(|v| v.iter().any(|c| !c.is_zero()))
}

/// The level-23 newform with `a_2 = w − 1`, eigenvalues for all `p <= bound`.
pub fn level23_newform(bound: u64) -> Result<Eigenform, EigenformError> {
    let field = NumberField::from_i64(&[-1, -1, 1])?;
    let basis = ProductBasis::new(bound.max(80) as usize);
    let m = hecke_t2(&basis, 40)?;
    let alpha = field.sub(&field.generator(), &field.one());
    // left eigenvector: (Mᵀ − α) v = 0
    let rows: Vec<Vec<NfElem>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let entry = field.from_rational(m[j][i].clone());
                    if i == j {
                        field.sub(&entry, &alpha)
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    let v = null_vector(&field, &rows)
        .ok_or_else(|| EigenformError::Header("no T_2 eigenvector".into()))?;
    let combine = |n: usize| -> NfElem {
        (0..3).fold(field.zero(), |acc, j| {
            field.add(&acc, &field.scale(&v[j], &rat(basis.coeff(j, n))))
        })
    };
    let constant = combine(0);
    if !constant.is_zero() {
        return Err(EigenformError::Header("eigenvector is not cuspidal".into()));
    }
    let norm = field.inv(&combine(1))?;
    let mut ap = BTreeMap::new();
    for p in primes_up_to(bound) {
        ap.insert(p, field.mul(&combine(p as usize), &norm));
    }
    if ap.get(&2) != Some(&alpha) {
        return Err(EigenformError::Header(
            "normalised a_2 disagrees with α".into(),
        ));
    }
    let local_types = BTreeMap::from([(
        23,
        LocalType {
            prime: 23,
            kind: LocalKind::Multiplicative,
        },
    )]);
    Eigenform::new(
        "23a",
        23,
        2,
        DirichletCharacter::trivial(1),
        field,
        ap,
        local_types,
        bound,
    )
}

/// Trace of `a` from `k` down to Q.
pub fn trace_over_q(k: &NumberField, a: &NfElem) -> BigRational {
    let mp = k.minpoly(a);
    let d = mp.deg();
    if d == 0 {
        return BigRational::zero();
    }
    let coeff = -mp.coeff(d - 1);
    coeff * rat((k.degree() / d) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_series_counts() {
        let r = representation_numbers(1, 1, 6, 30);
        assert_eq!(&r[..7], &[1, 2, 0, 0, 2, 0, 4]);
        let s = representation_numbers(2, 1, 3, 30);
        assert_eq!(&s[..5], &[1, 0, 2, 2, 2]);
        // r_1 + 2 r_2 counts ideals: 2·(1 + (−23|n)) at primes
        for p in primes_up_to(30) {
            if p == 23 {
                continue;
            }
            let chi = crate::groups::kronecker_symbol(-23, p as i64);
            assert_eq!(
                r[p as usize] + 2 * s[p as usize],
                2 + 2 * chi as i64,
                "p={p}"
            );
        }
    }

    #[test]
    fn hecke_matrix_has_expected_charpoly() {
        let basis = ProductBasis::new(100);
        let m = hecke_t2(&basis, 40).unwrap();
        // trace and determinant of (x - 3)(x² + x - 1)
        let tr: BigRational = (0..3).map(|i| m[i][i].clone()).sum();
        assert_eq!(tr, rat(2));
        let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
        assert_eq!(det, rat(-3));
    }

    #[test]
    fn eigenvalues_match_jacobian_point_counts() {
        // X0(23): y² = (x³ − x + 1)(x³ − 8x² + 3x − 7); #C(F_p) = p + 1 − Tr(a_p)
        let f = level23_newform(400).unwrap();
        let check_product: Vec<i64> = {
            let a = [1i64, 0, -1, 1];
            let b = [1i64, -8, 3, -7];
            let mut out = vec![0i64; 7];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        for p in primes_up_to(400) {
            if p == 2 || p == 23 {
                continue;
            }
            let pi = p as i64;
            let squares: Vec<bool> = {
                let mut s = vec![false; p as usize];
                for y in 0..pi {
                    s[(y * y % pi) as usize] = true;
                }
                s
            };
            let mut count = 2; // two points at infinity: leading coefficient 1
            for x in 0..pi {
                let v = check_product
                    .iter()
                    .fold(0i64, |acc, &c| (acc * x + c).rem_euclid(pi));
                count += if v == 0 {
                    1
                } else if squares[v as usize] {
                    2
                } else {
                    0
                };
            }
            let trace = trace_over_q(&f.field, f.ap(p).unwrap());
            assert_eq!(rat(pi + 1 - count), trace, "p={p}");
        }
    }
}
