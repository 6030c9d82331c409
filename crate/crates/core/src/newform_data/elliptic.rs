//! Traces of Frobenius of elliptic curves over Q by exhaustive point counts.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::arith::is_prime;
use crate::par;
use crate::primes::primes_up_to;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular model: discriminant is zero")]
    Singular,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad reduction at p={0}")]
    BadReduction(u64),
}

/// Long Weierstrass model `y² + a1xy + a3y = x³ + a2x² + a4x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurveModel {
    pub a: [i64; 5],
    pub label: String,
}

impl EllipticCurveModel {
    /// Coefficients `[a1, a2, a3, a4, a6]`.
    pub fn new(a: [i64; 5], label: impl Into<String>) -> Result<Self, CurveError> {
        let e = EllipticCurveModel {
            a,
            label: label.into(),
        };
        if e.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(e)
    }

    pub fn discriminant(&self) -> BigInt {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        !(self.discriminant() % BigInt::from(p)).is_zero()
    }

    /// Number of points over F_p of the reduced (possibly singular) cubic,
    /// including the point at infinity.
    pub fn count_points(&self, p: u64) -> u64 {
        let pi = p as i64;
        let [a1, a2, a3, a4, a6] = self.a.map(|c| c.rem_euclid(pi) as u64);
        let m = |a: u64, b: u64| a * b % p;
        if p == 2 {
            let mut n = 1;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = (y * y + a1 * x * y + a3 * y) % 2;
                    let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                    n += u64::from(lhs == rhs);
                }
            }
            return n;
        }
        // (2y + a1x + a3)² = 4(x³ + a2x² + a4x + a6) + (a1x + a3)²
        let mut square_roots = vec![0u64; p as usize];
        for y in 0..p {
            square_roots[m(y, y) as usize] += 1;
        }
        let mut n = 1;
        for x in 0..p {
            let cubic = (m(m(x, x), x) + m(a2, m(x, x)) + m(a4, x) + a6) % p;
            let lin = (m(a1, x) + a3) % p;
            let disc = (4 * cubic + m(lin, lin)) % p;
            n += square_roots[disc as usize];
        }
        n
    }

    /// `a_p = p + 1 - #E(F_p)` at a prime of good reduction.
    pub fn ap(&self, p: u64) -> Result<i64, CurveError> {
        if !is_prime(p) {
            return Err(CurveError::NotPrime(p));
        }
        if !self.has_good_reduction(p) {
            return Err(CurveError::BadReduction(p));
        }
        Ok(p as i64 + 1 - self.count_points(p) as i64)
    }

    /// `p + 1 - #Ẽ(F_p)` at any prime; at bad primes of a minimal model
    /// this is 1, -1 or 0 according to split, nonsplit or additive
    /// reduction.
    pub fn trace_any(&self, p: u64) -> i64 {
        p as i64 + 1 - self.count_points(p) as i64
    }

    /// Traces at every prime up to `bound`, computed in parallel.
    pub fn ap_table(&self, bound: u64) -> Vec<(u64, i64)> {
        let primes = primes_up_to(bound);
        let traces = par::map(&primes, |&p| self.trace_any(p));
        primes.into_iter().zip(traces).collect()
    }
}

/// `a_p` of a model at a good prime.
pub fn ec_ap(e: &EllipticCurveModel, p: u64) -> Result<i64, CurveError> {
    e.ap(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e11() -> EllipticCurveModel {
        EllipticCurveModel::new([0, -1, 1, -10, -20], "11a").unwrap()
    }

    #[test]
    fn examples() {
        let e = e11();
        assert_eq!(e.discriminant(), BigInt::from(-161051));
        assert_eq!(ec_ap(&e, 2), Ok(-2));
        assert_eq!(ec_ap(&e, 3), Ok(-1));
        assert_eq!(ec_ap(&e, 11), Err(CurveError::BadReduction(11)));
        assert_eq!(e.trace_any(11), 1);
        let cm = EllipticCurveModel::new([0, 0, 1, 0, -7], "27a").unwrap();
        assert_eq!(ec_ap(&cm, 2), Ok(0));
        assert!(EllipticCurveModel::new([0, 0, 0, 0, 0], "cusp").is_err());
    }

    #[test]
    fn brute_force_agrees_and_hasse_holds() {
        let e = e11();
        for p in primes_up_to(200) {
            let pi = p as i64;
            let [a1, a2, a3, a4, a6] = e.a;
            let mut n = 1;
            for x in 0..pi {
                for y in 0..pi {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    n += i64::from((lhs - rhs).rem_euclid(pi) == 0);
                }
            }
            assert_eq!(e.count_points(p) as i64, n, "p={p}");
            let ap = e.trace_any(p);
            assert!(ap * ap <= 4 * pi);
        }
    }
}
