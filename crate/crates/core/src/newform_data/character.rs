//! Dirichlet characters with values in cyclotomic fields.
//!
//! A character mod `m` is stored by the images of the canonical generators
//! of `(Z/mZ)^×` (see [`unit_generators`]), each a root of unity `ζ_den^num`.
//! Internally every value is an exponent of `ζ_order`, where `order` is the
//! order of the character, and a table of those exponents over all residues
//! is kept so evaluation is a lookup.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::arith::{
    divisors, factorize, gcd, lcm, mul_mod, pow_mod, primitive_root_prime_power,
};
use crate::algebra::cyclotomic::cyclotomic_poly;
use crate::algebra::roots::roots_in_field;
use crate::algebra::{AlgebraError, NfElem, NumberField};
use crate::groups::kronecker_symbol;

/// Largest modulus for which a character keeps a value table.
pub const CHARACTER_MODULUS_CAP: u64 = 1 << 22;

const NO_VALUE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("modulus {0} outside the supported range")]
    Modulus(u64),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image ζ_{den}^{num} of generator {generator} has order not dividing {order}")]
    ImageOrder {
        generator: u64,
        num: i64,
        den: i64,
        order: u64,
    },
    #[error("character values of order {0} are not in the coefficient field")]
    ValueField(u64),
    #[error("moduli {0} and {1} are incompatible")]
    ModulusMismatch(u64, u64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Canonical generators of `(Z/mZ)^×` with their orders: for the 2-part,
/// `-1` when `4 | m` and additionally `5` when `8 | m`; then, for each odd
/// prime power `p^e || m` in increasing order, the least primitive root mod
/// `p^e`. Each generator is lifted by CRT to be `1` modulo the other parts.
pub fn unit_generators(m: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if m < 3 {
        return out;
    }
    let lift = |residue: u64, part: u64| -> u64 {
        let rest = m / part;
        if rest == 1 {
            return residue % part;
        }
        crate::algebra::arith::crt_pair(residue % part, part, 1, rest) % m
    };
    for (p, e) in factorize(m) {
        let pe = p.pow(e);
        if p == 2 {
            if e >= 2 {
                out.push((lift(pe - 1, pe), 2));
            }
            if e >= 3 {
                out.push((lift(5, pe), pe / 4));
            }
        } else {
            let g = primitive_root_prime_power(p, e);
            out.push((lift(g, pe), pe / p * (p - 1)));
        }
    }
    out
}

#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    /// Generator residues and their orders.
    gens: Vec<(u64, u64)>,
    /// Image of generator `i` is `ζ_order^exps[i]`.
    exps: Vec<u64>,
    table: Arc<Vec<u32>>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus)
            .field("order", &self.order)
            .field("images", &self.generator_images())
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.order == other.order && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    /// Character mod `modulus` sending canonical generator `i` to
    /// `exp(2πi · num_i / den_i)`.
    pub fn new(modulus: u64, images: &[(i64, i64)]) -> Result<Self, CharacterError> {
        if modulus == 0 || modulus > CHARACTER_MODULUS_CAP {
            return Err(CharacterError::Modulus(modulus));
        }
        let gens = unit_generators(modulus);
        if gens.len() != images.len() {
            return Err(CharacterError::ImageCount {
                expected: gens.len(),
                got: images.len(),
            });
        }
        // reduce each image to num/den in lowest terms with 0 <= num < den
        let mut reduced = Vec::with_capacity(images.len());
        for (&(g, ord), &(num, den)) in gens.iter().zip(images) {
            if den <= 0 {
                return Err(CharacterError::ImageOrder {
                    generator: g,
                    num,
                    den,
                    order: ord,
                });
            }
            let n = num.rem_euclid(den) as u64;
            let d = den as u64;
            let c = gcd(n, d);
            let (n, d) = (n / c, d / c);
            if ord % d != 0 {
                return Err(CharacterError::ImageOrder {
                    generator: g,
                    num,
                    den,
                    order: ord,
                });
            }
            reduced.push((n, d));
        }
        let order = reduced.iter().fold(1, |acc, &(_, d)| lcm(acc, d));
        let exps = reduced.iter().map(|&(n, d)| n * (order / d)).collect();
        Ok(DirichletCharacter::from_exponents(modulus, order, exps))
    }

    fn from_exponents(modulus: u64, order: u64, exps: Vec<u64>) -> Self {
        let gens = unit_generators(modulus);
        // shrink the order to the true lcm of the image orders
        let true_order = exps
            .iter()
            .fold(1, |acc, &e| lcm(acc, order / gcd(e % order, order)));
        let exps: Vec<u64> = exps
            .iter()
            .map(|&e| (e % order) / (order / true_order))
            .collect();
        let table = Arc::new(value_table(modulus, true_order, &gens, &exps));
        DirichletCharacter {
            modulus,
            order: true_order,
            gens,
            exps,
            table,
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        let n = unit_generators(modulus.max(1)).len();
        DirichletCharacter::from_exponents(modulus.max(1), 1, vec![0; n])
    }

    /// The character `a ↦ (d|a)` of modulus `|d|`, for a fundamental
    /// discriminant `d` (or `d = 1`).
    pub fn kronecker(d: i64) -> Result<Self, CharacterError> {
        let m = d.unsigned_abs();
        if m == 0 || m > CHARACTER_MODULUS_CAP {
            return Err(CharacterError::Modulus(m));
        }
        let exps = unit_generators(m)
            .iter()
            .map(|&(g, _)| u64::from(kronecker_symbol(d, g as i64) == -1))
            .collect();
        let chi = DirichletCharacter::from_exponents(m, 2, exps);
        debug_assert!((1..m.min(200))
            .filter(|&a| gcd(a, m) == 1)
            .all(|a| chi.quadratic_value(a as i64) == kronecker_symbol(d, a as i64)));
        Ok(chi)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.gens
    }

    /// Images of the canonical generators as reduced `(num, den)` with
    /// value `exp(2πi·num/den)`.
    pub fn generator_images(&self) -> Vec<(i64, i64)> {
        self.exps
            .iter()
            .map(|&e| {
                let c = gcd(e, self.order);
                ((e / c) as i64, (self.order / c) as i64)
            })
            .collect()
    }

    /// Exponent `e` with `χ(a) = ζ_order^e`, or `None` when `gcd(a, m) > 1`.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        match self.table[r] {
            NO_VALUE => None,
            e => Some(e as u64),
        }
    }

    /// Value of a character of order at most 2 as an integer in {-1, 0, 1}.
    pub fn quadratic_value(&self, a: i64) -> i8 {
        debug_assert!(self.order <= 2);
        match self.exponent(a) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Real-valued, i.e. of order at most 2.
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// `χ(-1)` as ±1.
    pub fn parity(&self) -> i8 {
        match self.exponent(-1) {
            Some(0) | None => 1,
            Some(_) => -1,
        }
    }

    /// Smallest `c | m` such that `χ` factors through `(Z/cZ)^×`.
    pub fn conductor(&self) -> u64 {
        let m = self.modulus;
        for c in divisors(m) {
            let trivial_on_kernel = (0..m / c)
                .map(|t| 1 + c * t)
                .filter(|&a| gcd(a, m) == 1)
                .all(|a| self.exponent(a as i64) == Some(0));
            if trivial_on_kernel {
                return c;
            }
        }
        m
    }

    /// The character on `(Z/MZ)^×` for a multiple `M` of the modulus.
    pub fn induce(&self, big: u64) -> Result<Self, CharacterError> {
        if big % self.modulus != 0 || big > CHARACTER_MODULUS_CAP {
            return Err(CharacterError::ModulusMismatch(self.modulus, big));
        }
        let exps = unit_generators(big)
            .iter()
            .map(|&(g, _)| self.exponent(g as i64).expect("generator is a unit"))
            .collect();
        Ok(DirichletCharacter::from_exponents(big, self.order, exps))
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let c = self.conductor();
        let exps = unit_generators(c)
            .iter()
            .map(|&(g, _)| {
                // any unit lift of g mod c coprime to m has the same value
                let lift = (0..self.modulus / c)
                    .map(|t| g + c * t)
                    .find(|&a| gcd(a, self.modulus) == 1)
                    .expect("units lift");
                self.exponent(lift as i64).expect("unit")
            })
            .collect();
        DirichletCharacter::from_exponents(c, self.order, exps)
    }

    /// Pointwise product, on the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Result<Self, CharacterError> {
        let m = lcm(self.modulus, other.modulus);
        let a = self.induce(m)?;
        let b = other.induce(m)?;
        let order = lcm(a.order, b.order);
        let exps = a
            .exps
            .iter()
            .zip(&b.exps)
            .map(|(&x, &y)| (x * (order / a.order) + y * (order / b.order)) % order)
            .collect();
        Ok(DirichletCharacter::from_exponents(m, order, exps))
    }

    pub fn pow(&self, k: i64) -> Self {
        let o = self.order as i64;
        let exps = self
            .exps
            .iter()
            .map(|&e| ((e as i64 * k).rem_euclid(o)) as u64)
            .collect();
        DirichletCharacter::from_exponents(self.modulus, self.order, exps)
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// Equality as functions on integers coprime to both moduli.
    pub fn same_primitive(&self, other: &Self) -> bool {
        self.primitive() == other.primitive()
    }

    /// For a primitive quadratic character, the fundamental discriminant
    /// `d` with `χ(a) = (d|a)`.
    pub fn fundamental_discriminant(&self) -> Option<i64> {
        if self.order != 2 {
            return (self.order == 1).then_some(1);
        }
        let c = self.conductor() as i64;
        Some(if self.parity() == 1 { c } else { -c })
    }

    /// Values of the character inside `field`, when `field` contains the
    /// `order`-th roots of unity. The first root of `Φ_order` in canonical
    /// order is used as `ζ_order`.
    pub fn values_in(&self, field: &NumberField) -> Result<CharacterValues, CharacterError> {
        let roots = match self.order {
            1 => vec![field.one()],
            2 => vec![field.from_int(-1)],
            o => roots_in_field(field, &cyclotomic_poly(o).to_qpoly())?,
        };
        CharacterValues::with_root(self, field, roots.into_iter().next())
    }

    /// All choices of `ζ_order` in `field`, each giving one embedding of the
    /// value field.
    pub fn all_values_in(
        &self,
        field: &NumberField,
    ) -> Result<Vec<CharacterValues>, CharacterError> {
        let roots = match self.order {
            1 => vec![field.one()],
            2 => vec![field.from_int(-1)],
            o => roots_in_field(field, &cyclotomic_poly(o).to_qpoly())?,
        };
        if roots.is_empty() {
            return Err(CharacterError::ValueField(self.order));
        }
        roots
            .into_iter()
            .map(|r| CharacterValues::with_root(self, field, Some(r)))
            .collect()
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial mod {}", self.modulus);
        }
        if let Some(d) = self
            .fundamental_discriminant()
            .filter(|_| self.conductor() == self.modulus)
        {
            return write!(f, "({d}|·)");
        }
        write!(f, "χ mod {} of order {} [", self.modulus, self.order)?;
        for (i, (n, d)) in self.generator_images().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}/{d}")?;
        }
        write!(f, "]")
    }
}

fn value_table(m: u64, order: u64, gens: &[(u64, u64)], exps: &[u64]) -> Vec<u32> {
    let mut table = vec![NO_VALUE; m as usize];
    table[(1 % m) as usize] = 0;
    let mut frontier = vec![1 % m];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in frontier {
            let ea = table[a as usize] as u64;
            for (&(g, _), &e) in gens.iter().zip(exps) {
                let b = mul_mod(a, g, m);
                if table[b as usize] == NO_VALUE {
                    table[b as usize] = ((ea + e) % order) as u32;
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    table
}

/// A character together with a chosen `ζ_order` in some number field.
#[derive(Clone, Debug)]
pub struct CharacterValues {
    pub character: DirichletCharacter,
    pub field: NumberField,
    pub zeta: NfElem,
    powers: Vec<NfElem>,
}

impl CharacterValues {
    fn with_root(
        chi: &DirichletCharacter,
        field: &NumberField,
        root: Option<NfElem>,
    ) -> Result<Self, CharacterError> {
        let zeta = root.ok_or(CharacterError::ValueField(chi.order))?;
        let mut powers = vec![field.one()];
        for _ in 1..chi.order {
            let next = field.mul(powers.last().expect("nonempty"), &zeta);
            powers.push(next);
        }
        Ok(CharacterValues {
            character: chi.clone(),
            field: field.clone(),
            zeta,
            powers,
        })
    }

    /// `χ(a)` as a field element (zero when `gcd(a, m) > 1`).
    pub fn value(&self, a: i64) -> NfElem {
        match self.character.exponent(a) {
            Some(e) => self.powers[e as usize].clone(),
            None => self.field.zero(),
        }
    }
}

/// Fundamental discriminants `d` whose Kronecker character has conductor
/// dividing `8·∏ p` over the odd primes `p` of `support` (or `∏ p` when
/// `2 ∉ support`), ordered by `|d|` and then sign. `1` stands for the trivial
/// character.
pub fn quadratic_discriminants(support: &[u64], include_trivial: bool) -> Vec<i64> {
    let mut odd: Vec<u64> = support.iter().copied().filter(|&p| p != 2).collect();
    odd.sort_unstable();
    odd.dedup();
    let two_parts: &[i64] = if support.contains(&2) {
        &[1, -4, 8, -8]
    } else {
        &[1]
    };
    let mut discs = Vec::new();
    for mask in 0u64..(1 << odd.len()) {
        let mut d: i64 = 1;
        for (i, &p) in odd.iter().enumerate() {
            if mask >> i & 1 == 1 {
                // p* = (-1)^((p-1)/2) p
                d *= if p % 4 == 1 { p as i64 } else { -(p as i64) };
            }
        }
        for &t in two_parts {
            discs.push(d * t);
        }
    }
    discs.sort_by_key(|&d| (d.unsigned_abs(), d));
    discs.retain(|&d| include_trivial || d != 1);
    discs
}

/// The characters of [`quadratic_discriminants`] as primitive Kronecker
/// characters.
pub fn enumerate_quadratic_characters(
    support: &[u64],
    include_trivial: bool,
) -> Result<Vec<DirichletCharacter>, CharacterError> {
    quadratic_discriminants(support, include_trivial)
        .into_iter()
        .map(DirichletCharacter::kronecker)
        .collect()
}

/// All characters mod `m`, trivial first. Refuses when `φ(m)` exceeds `cap`.
pub fn enumerate_characters(m: u64, cap: u64) -> Result<Vec<DirichletCharacter>, CharacterError> {
    let gens = unit_generators(m);
    let count: u64 = gens.iter().map(|&(_, o)| o).product();
    if count > cap {
        return Err(CharacterError::Modulus(m));
    }
    let order = gens.iter().fold(1, |acc, &(_, o)| lcm(acc, o));
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0u64; gens.len()];
    loop {
        let exps = idx
            .iter()
            .zip(&gens)
            .map(|(&k, &(_, o))| k * (order / o))
            .collect();
        out.push(DirichletCharacter::from_exponents(m, order, exps));
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < gens[i].1 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `g^k mod m` for a possibly negative exponent of a unit.
pub fn unit_pow(g: u64, k: i64, m: u64, order: u64) -> u64 {
    pow_mod(g, k.rem_euclid(order as i64) as u64, m)
}
