//! Cyclotomic polynomials and minimal polynomials of `ζ_n + ζ_n^{-1}`.

use num_bigint::BigInt;

use super::arith::{divisors, euler_phi};
use super::poly::PolyInt;
use super::AlgebraError;

/// `Φ_n(x)`, by dividing `x^n - 1` by `Φ_d` for the proper divisors `d`.
pub fn cyclotomic_poly(n: u64) -> PolyInt {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut coeffs = vec![0i64; n as usize + 1];
    coeffs[0] = -1;
    coeffs[n as usize] = 1;
    let mut f = PolyInt::from_i64(&coeffs);
    for d in divisors(n) {
        if d < n {
            f = f
                .exact_div(&cyclotomic_poly(d))
                .expect("Φ_d divides x^n - 1");
        }
    }
    f
}

/// `C_k` with `C_k(x + 1/x) = x^k + x^{-k}`.
fn chebyshev_sums(max: usize) -> Vec<PolyInt> {
    let mut out = vec![PolyInt::from_i64(&[2]), PolyInt::x()];
    while out.len() <= max {
        let k = out.len();
        let next = PolyInt::x().mul(&out[k - 1]).sub(&out[k - 2]);
        out.push(next);
    }
    out.truncate(max + 1);
    out
}

/// Minimal polynomial of `ζ_n + ζ_n^{-1}`, of degree `φ(n)/2`.
pub fn real_cyclotomic_minpoly(n: u64) -> Result<PolyInt, AlgebraError> {
    if n < 3 {
        return Err(AlgebraError::InvalidArgument(format!(
            "real cyclotomic index must be at least 3, got {n}"
        )));
    }
    let phi = cyclotomic_poly(n);
    let h = (euler_phi(n) / 2) as usize;
    let c = chebyshev_sums(h);
    let mut out = PolyInt::new(vec![phi.coeff(h)]);
    for (k, ck) in c.iter().enumerate().skip(1) {
        out = out.add(&ck.scale(&phi.coeff(h + k)));
    }
    debug_assert!(substitution_check(&out, &phi));
    Ok(out)
}

/// Whether `x^h P(x + 1/x) = Φ` with `h = deg P`.
pub fn substitution_check(p: &PolyInt, phi: &PolyInt) -> bool {
    let h = p.deg();
    let x2_plus_1 = PolyInt::from_i64(&[1, 0, 1]);
    let mut acc = PolyInt::zero();
    let mut power = PolyInt::one();
    for j in 0..=h {
        // x^(h-j) (x^2+1)^j
        let mut shift = vec![BigInt::from(0); h - j];
        shift.push(BigInt::from(1));
        acc = acc.add(&power.mul(&PolyInt::new(shift)).scale(&p.coeff(j)));
        power = power.mul(&x2_plus_1);
    }
    &acc == phi
}
