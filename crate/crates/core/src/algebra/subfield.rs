//! The subfield of a number field generated by a list of elements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::linalg::EchelonBasis;
use super::number_field::{NfElem, NumberField};
use super::poly::PolyInt;
use super::roots::check_degree_cap;
use super::AlgebraError;

/// A subfield presented abstractly, with the image of its generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subfield {
    pub field: NumberField,
    /// Image in the ambient field of the subfield's generator.
    pub embedding: NfElem,
}

impl Subfield {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Push an element of the subfield into the ambient field.
    pub fn embed(&self, ambient: &NumberField, a: &NfElem) -> NfElem {
        ambient.eval_poly(&a.to_qpoly(), &self.embedding)
    }
}

/// Q-span of the subalgebra generated by `gens`.
fn subalgebra_span(f: &NumberField, gens: &[NfElem]) -> (EchelonBasis, Vec<NfElem>) {
    let mut basis = EchelonBasis::new();
    let mut elems = vec![f.one()];
    basis.insert(f.one().coords());
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for g in gens {
                let prod = f.mul(b, g);
                if basis.insert(prod.coords()) {
                    elems.push(prod.clone());
                    next.push(prod);
                    if basis.dim() == f.degree() {
                        return (basis, elems);
                    }
                }
            }
        }
        frontier = next;
    }
    (basis, elems)
}

/// Smallest subfield containing all of `gens`.
pub fn generated_subfield(f: &NumberField, gens: &[NfElem]) -> Result<Subfield, AlgebraError> {
    if gens.is_empty() {
        return Err(AlgebraError::InvalidArgument(
            "generator list must be nonempty".to_string(),
        ));
    }
    if gens.iter().any(|g| !f.contains(g)) {
        return Err(AlgebraError::FieldMismatch);
    }
    check_degree_cap(f)?;
    let (basis, elems) = subalgebra_span(f, gens);
    let dim = basis.dim();
    if dim == f.degree() {
        return Ok(Subfield {
            field: f.clone(),
            embedding: f.generator(),
        });
    }
    if dim == 1 {
        return Ok(Subfield {
            field: NumberField::rationals(),
            embedding: f.zero(),
        });
    }
    let primitive = primitive_element(f, gens, &elems, dim);
    let minpoly = f.minpoly(&primitive);
    // scale so the minimal polynomial becomes monic with integer coefficients
    let den = minpoly
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let k = minpoly.deg();
    let scaled: Vec<BigInt> = (0..=k)
        .map(|i| {
            let c =
                minpoly.coeff(i) * BigRational::from_integer(num_traits::pow(den.clone(), k - i));
            c.to_integer()
        })
        .collect();
    let field = NumberField::new_unchecked(PolyInt::new(scaled))?;
    let embedding = f.scale(&primitive, &BigRational::from_integer(den));
    Ok(Subfield { field, embedding })
}

fn primitive_element(f: &NumberField, gens: &[NfElem], elems: &[NfElem], dim: usize) -> NfElem {
    for g in gens {
        if f.minpoly(g).deg() == dim {
            return g.clone();
        }
    }
    for t in 1i64.. {
        // sum_j t^j b_j over the span basis
        let mut acc = f.zero();
        let mut weight = BigRational::one();
        for b in elems.iter().skip(1) {
            weight *= BigRational::from_integer(BigInt::from(t));
            acc = f.add(&acc, &f.scale(b, &weight));
        }
        if f.minpoly(&acc).deg() == dim {
            return acc;
        }
    }
    unreachable!("a primitive element exists among finitely many bad choices")
}

/// Minimal polynomial of `y + c·z` in `Q[y]/(f) ⊗ Q[z]/(g)` for the first
/// `c >= 1` where it has full degree `deg f · deg g`. When the two fields are
/// linearly disjoint the result defines their compositum. `f` and `g` must be
/// monic.
pub fn compositum(f: &PolyInt, g: &PolyInt) -> Result<PolyInt, AlgebraError> {
    if !f.is_monic() || !g.is_monic() || f.deg() == 0 || g.deg() == 0 {
        return Err(AlgebraError::InvalidArgument(
            "compositum needs monic nonconstant polynomials".to_string(),
        ));
    }
    let (m, n) = (f.deg(), g.deg());
    let dim = m * n;
    // multiply a tensor (row i = coefficient of y^i) by y or by z
    let times_y = |t: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::from(0); n]; m];
        for i in 0..m {
            for j in 0..n {
                if i + 1 < m {
                    out[i + 1][j] += &t[i][j];
                } else {
                    for (r, row) in out.iter_mut().enumerate() {
                        row[j] -= &t[i][j] * f.coeff(r);
                    }
                }
            }
        }
        out
    };
    let times_z = |t: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::from(0); n]; m];
        for i in 0..m {
            for j in 0..n {
                if j + 1 < n {
                    out[i][j + 1] += &t[i][j];
                } else {
                    for r in 0..n {
                        out[i][r] -= &t[i][j] * g.coeff(r);
                    }
                }
            }
        }
        out
    };
    for c in 1..=dim as i64 + 1 {
        let cz = BigInt::from(c);
        let mut one = vec![vec![BigInt::from(0); n]; m];
        one[0][0] = BigInt::one();
        let mut powers = vec![one];
        for _ in 0..dim {
            let last = powers.last().expect("nonempty");
            let (a, b) = (times_y(last), times_z(last));
            let next = a
                .iter()
                .zip(&b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + &cz * y).collect())
                .collect();
            powers.push(next);
        }
        let matrix: Vec<Vec<BigRational>> = (0..dim)
            .map(|r| {
                powers
                    .iter()
                    .map(|t| BigRational::from_integer(t[r / n][r % n].clone()))
                    .collect()
            })
            .collect();
        let ker = super::linalg::kernel(&matrix);
        if ker.len() != 1 || ker[0][dim] == BigRational::from_integer(BigInt::from(0)) {
            continue;
        }
        let lead = ker[0][dim].clone();
        // θ is integral, so the monic minimal polynomial has integer coefficients
        return Ok(PolyInt::new(
            ker[0].iter().map(|v| (v / &lead).to_integer()).collect(),
        ));
    }
    Err(AlgebraError::InvalidArgument(
        "tensor algebra has no element of full degree".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cyclotomic::cyclotomic_poly;

    #[test]
    fn subfield_examples() {
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        let s = generated_subfield(&k, &[k.generator()]).unwrap();
        assert_eq!(s.field.poly(), k.poly());
        let q = generated_subfield(&k, &[k.from_int(5)]).unwrap();
        assert_eq!(q.degree(), 1);

        let phi5 = NumberField::new(cyclotomic_poly(5)).unwrap();
        let x = phi5.generator();
        let x4 = phi5.pow(&x, 4);
        let s = generated_subfield(&phi5, &[phi5.add(&x, &x4)]).unwrap();
        assert_eq!(s.field.poly(), &PolyInt::from_i64(&[-1, 1, 1]));
        let y = s.embedding.clone();
        let check = phi5.add(&phi5.add(&phi5.mul(&y, &y), &y), &phi5.from_int(-1));
        assert!(check.is_zero());
    }

    #[test]
    fn compositum_examples() {
        let h = compositum(
            &PolyInt::from_i64(&[1, 0, 1]),
            &PolyInt::from_i64(&[-5, 0, 1]),
        )
        .unwrap();
        assert_eq!(h.deg(), 4);
        assert!(NumberField::new(h).is_ok());
        // Q(√2) and Q(√8) coincide: the tensor algebra is not a field
        let h = compositum(
            &PolyInt::from_i64(&[-2, 0, 1]),
            &PolyInt::from_i64(&[-8, 0, 1]),
        )
        .unwrap();
        assert!(NumberField::new(h).is_err());
    }

    #[test]
    fn rejects_empty_generators() {
        let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
        assert!(generated_subfield(&k, &[]).is_err());
    }
}
