//! Explicit finite groups, coset orbits, and exact densities of congruence
//! and splitting conditions on primes.
//!
//! Groups are kept as explicit element lists (identity at index 0) with the
//! product evaluated from a concrete representation: a stored table, residues
//! modulo `m`, permutations, or a direct product. Orders are capped at
//! [`GROUP_ORDER_CAP`].

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::arith::{euler_phi, gcd, inv_mod, lcm};
use crate::par;

pub const GROUP_ORDER_CAP: usize = 10_000;

/// Largest combined modulus [`sieve_density`] will enumerate.
pub const SIEVE_MODULUS_CAP: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {0} exceeds the cap of {GROUP_ORDER_CAP}")]
    OrderCap(usize),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("element index {0} out of range")]
    NotElement(usize),
    #[error("invalid group law: {0}")]
    InvalidLaw(String),
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("combined modulus {0} exceeds the enumeration cap")]
    ModulusCap(u64),
}

#[derive(Clone, Debug)]
enum Law {
    Table(Vec<Vec<u32>>),
    Cyclic(usize),
    Residues {
        modulus: u64,
        values: Vec<u64>,
        index: HashMap<u64, usize>,
    },
    Perms {
        perms: Vec<Vec<u16>>,
        index: HashMap<Vec<u16>, usize>,
    },
    Product(Box<FiniteGroup>, Box<FiniteGroup>),
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    law: Law,
    order: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    fn finish(law: Law, order: usize) -> Result<Self, GroupError> {
        let mut g = FiniteGroup {
            law,
            order,
            inverses: Vec::new(),
        };
        if g.mul(0, 0) != 0 {
            return Err(GroupError::InvalidLaw(
                "element 0 is not the identity".into(),
            ));
        }
        let mut inverses = vec![usize::MAX; order];
        if let Law::Residues {
            modulus,
            values,
            index,
        } = &g.law
        {
            for (a, &v) in values.iter().enumerate() {
                inverses[a] = index[&inv_mod(v, *modulus).expect("unit")];
            }
        }
        for a in 0..order {
            if inverses[a] != usize::MAX {
                continue;
            }
            let b = (0..order)
                .find(|&b| g.mul(a, b) == 0)
                .ok_or_else(|| GroupError::InvalidLaw(format!("element {a} has no inverse")))?;
            inverses[a] = b;
            inverses[b] = a;
        }
        g.inverses = inverses;
        Ok(g)
    }

    /// Group from a full multiplication table; identity must be element 0.
    /// Closure, identity and inverse laws are checked exhaustively and
    /// associativity on all triples for orders up to 64 (sampled beyond).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || n > GROUP_ORDER_CAP {
            return Err(GroupError::OrderCap(n));
        }
        if table
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(GroupError::InvalidLaw("table is not closed".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if table[0][a] != a || row[0] != a {
                return Err(GroupError::InvalidLaw(
                    "element 0 is not the identity".into(),
                ));
            }
        }
        let step = if n <= 64 { 1 } else { n / 16 };
        for a in (0..n).step_by(step) {
            for b in (0..n).step_by(step) {
                for c in (0..n).step_by(step) {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::InvalidLaw(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let law = Law::Table(
            table
                .into_iter()
                .map(|row| row.into_iter().map(|x| x as u32).collect())
                .collect(),
        );
        FiniteGroup::finish(law, n)
    }

    /// Z/n under addition, element `i` being the residue `i`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > GROUP_ORDER_CAP {
            return Err(GroupError::OrderCap(n));
        }
        FiniteGroup::finish(Law::Cyclic(n), n)
    }

    /// Permutation group generated by `gens` on `0..degree`; permutations
    /// compose left to right (`(ab)(i) = b(a(i))`), so cosets and orbits
    /// follow the right-action convention.
    pub fn permutation(degree: usize, gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree
                || g.iter()
                    .any(|&i| i >= degree || std::mem::replace(&mut seen[i], true))
            {
                return Err(GroupError::InvalidLaw(format!(
                    "{g:?} is not a permutation"
                )));
            }
        }
        let identity: Vec<u16> = (0..degree as u16).collect();
        let gens: Vec<Vec<u16>> = gens
            .iter()
            .map(|g| g.iter().map(|&i| i as u16).collect())
            .collect();
        let mut perms = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut frontier = 0;
        while frontier < perms.len() {
            for g in &gens {
                let next = compose(&perms[frontier], g);
                if !index.contains_key(&next) {
                    if perms.len() == GROUP_ORDER_CAP {
                        return Err(GroupError::OrderCap(GROUP_ORDER_CAP + 1));
                    }
                    index.insert(next.clone(), perms.len());
                    perms.push(next);
                }
            }
            frontier += 1;
        }
        let order = perms.len();
        FiniteGroup::finish(Law::Perms { perms, index }, order)
    }

    /// The full symmetric group on `0..n`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n <= 1 {
            return FiniteGroup::permutation(n, &[]);
        }
        let transposition: Vec<usize> = (0..n)
            .map(|i| match i {
                0 => 1,
                1 => 0,
                _ => i,
            })
            .collect();
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::permutation(n, &[transposition, cycle])
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let order = a.order * b.order;
        if order > GROUP_ORDER_CAP {
            return Err(GroupError::OrderCap(order));
        }
        FiniteGroup::finish(
            Law::Product(Box::new(a.clone()), Box::new(b.clone())),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.law {
            Law::Table(t) => t[a][b] as usize,
            Law::Cyclic(n) => (a + b) % n,
            Law::Residues {
                modulus,
                values,
                index,
            } => index[&((values[a] as u128 * values[b] as u128 % *modulus as u128) as u64)],
            Law::Perms { perms, index } => index[&compose(&perms[a], &perms[b])],
            Law::Product(x, y) => {
                let n = y.order;
                x.mul(a / n, b / n) * n + y.mul(a % n, b % n)
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let (mut base, mut e, mut acc) = (a, e, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `g a g^-1`.
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Result<Vec<usize>, GroupError> {
        if let Some(&bad) = gens.iter().find(|&&g| g >= self.order) {
            return Err(GroupError::NotElement(bad));
        }
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let next = self.mul(out[i], g);
                if !seen[next] {
                    seen[next] = true;
                    out.push(next);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Check that `subset` is a subgroup; returns it sorted and deduplicated.
    pub fn check_subgroup(&self, subset: &[usize]) -> Result<Vec<usize>, GroupError> {
        let mut h = subset.to_vec();
        h.sort_unstable();
        h.dedup();
        if let Some(&bad) = h.iter().find(|&&g| g >= self.order) {
            return Err(GroupError::NotElement(bad));
        }
        if h.first() != Some(&0) {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        let mut member = vec![false; self.order];
        for &a in &h {
            member[a] = true;
        }
        for &a in &h {
            for &b in &h {
                if !member[self.mul(a, self.inv(b))] {
                    return Err(GroupError::NotSubgroup(format!(
                        "not closed: {a} * {b}^-1 escapes"
                    )));
                }
            }
        }
        Ok(h)
    }

    /// Permutation of element `a`, when the group is a permutation group.
    pub fn as_permutation(&self, a: usize) -> Option<Vec<usize>> {
        match &self.law {
            Law::Perms { perms, .. } => Some(perms[a].iter().map(|&i| i as usize).collect()),
            _ => None,
        }
    }

    /// Index of a permutation in a permutation group.
    pub fn find_permutation(&self, p: &[usize]) -> Option<usize> {
        match &self.law {
            Law::Perms { index, .. } => {
                let key: Vec<u16> = p.iter().map(|&i| i as u16).collect();
                index.get(&key).copied()
            }
            _ => None,
        }
    }
}

fn compose(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().map(|&i| b[i as usize]).collect()
}

/// Right cosets `H\G = {Hg}`, each represented by its least element index.
#[derive(Clone, Debug)]
pub struct CosetSpace<'a> {
    pub group: &'a FiniteGroup,
    pub subgroup: Vec<usize>,
    /// Sorted representatives.
    pub representatives: Vec<usize>,
    coset_of: Vec<usize>,
}

impl<'a> CosetSpace<'a> {
    pub fn new(group: &'a FiniteGroup, subgroup: &[usize]) -> Result<Self, GroupError> {
        let subgroup = group.check_subgroup(subgroup)?;
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut representatives = Vec::new();
        for g in group.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            representatives.push(g);
            for &h in &subgroup {
                coset_of[group.mul(h, g)] = id;
            }
        }
        Ok(CosetSpace {
            group,
            subgroup,
            representatives,
            coset_of,
        })
    }

    pub fn index(&self) -> usize {
        self.representatives.len()
    }

    /// Coset number containing `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// The permutation `Hg ↦ Hgφ` of the cosets.
    pub fn right_action(&self, phi: usize) -> Vec<usize> {
        self.representatives
            .iter()
            .map(|&g| self.coset_of[self.group.mul(g, phi)])
            .collect()
    }

    /// Sorted orbit sizes of `⟨φ⟩` acting on the right.
    pub fn orbit_sizes(&self, phi: usize) -> Vec<usize> {
        cycle_type(&self.right_action(phi))
    }
}

/// Sorted cycle lengths of a permutation.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// Orbit sizes of `⟨φ⟩` acting on `H\G` by right multiplication, sorted.
pub fn coset_orbit_splitting(
    group: &FiniteGroup,
    subgroup: &[usize],
    phi: usize,
) -> Result<Vec<usize>, GroupError> {
    if phi >= group.order() {
        return Err(GroupError::NotElement(phi));
    }
    Ok(CosetSpace::new(group, subgroup)?.orbit_sizes(phi))
}

/// Proportion of `g ∈ G` whose coset action has an orbit of size exactly `n`.
pub fn density_of_degree(
    group: &FiniteGroup,
    subgroup: &[usize],
    n: usize,
) -> Result<BigRational, GroupError> {
    let cosets = CosetSpace::new(group, subgroup)?;
    let elements: Vec<usize> = group.elements().collect();
    let hits = par::count(&elements, |&g| cosets.orbit_sizes(g).contains(&n));
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(group.order()),
    ))
}

/// `(Z/mZ)^×` with its residue labels.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    pub group: FiniteGroup,
}

impl UnitGroup {
    /// Residue of element `a`.
    pub fn residue(&self, a: usize) -> u64 {
        match &self.group.law {
            Law::Residues { values, .. } => values[a],
            _ => unreachable!("unit groups use the residue law"),
        }
    }

    /// Element index of a residue coprime to the modulus.
    pub fn element(&self, r: i64) -> Option<usize> {
        let r = r.rem_euclid(self.modulus as i64) as u64;
        match &self.group.law {
            Law::Residues { index, .. } => index.get(&r).copied(),
            _ => unreachable!("unit groups use the residue law"),
        }
    }

    /// Orders of the invariant factors `Z/d_1 × … × Z/d_k`, `d_i | d_{i+1}`.
    pub fn invariant_factors(&self) -> Vec<usize> {
        let g = &self.group;
        let orders: Vec<usize> = g.elements().map(|a| g.element_order(a)).collect();
        let mut width = 0;
        let mut parts: Vec<(usize, Vec<u32>)> = Vec::new();
        for (p, e) in crate::algebra::arith::factorize(g.order() as u64) {
            let p = p as usize;
            // c[j] = #{a : a^(p^j) = 1} = p^(Σ min(j, e_i)), so successive
            // quotients count the cyclic p-factors of exponent >= j
            let c: Vec<usize> = (0..=e + 1)
                .map(|j| orders.iter().filter(|&&o| p.pow(j) % o == 0).count())
                .collect();
            let rank = |j: usize| ilog(c[j] / c[j - 1], p);
            let mut exps = Vec::new();
            for j in 1..=e as usize {
                for _ in 0..rank(j) - rank(j + 1) {
                    exps.push(j as u32);
                }
            }
            width = width.max(exps.len());
            parts.push((p, exps));
        }
        let mut out = vec![1usize; width];
        for (p, mut exps) in parts {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                out[width - 1 - i] *= p.pow(e);
            }
        }
        out
    }
}

fn ilog(mut n: usize, p: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

/// `(Z/mZ)^×` as an explicit group; element 0 is the residue 1 and the rest
/// follow in increasing order.
pub fn unit_group(m: u64) -> Result<UnitGroup, GroupError> {
    if m < 2 {
        return Err(GroupError::InvalidLaw(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    let order = euler_phi(m) as usize;
    if order > GROUP_ORDER_CAP {
        return Err(GroupError::OrderCap(order));
    }
    let values: Vec<u64> = (1..m.max(2)).filter(|&a| gcd(a, m) == 1).collect();
    let values = if m == 2 { vec![1] } else { values };
    let index = values.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let group = FiniteGroup::finish(
        Law::Residues {
            modulus: m,
            values,
            index,
        },
        order,
    )?;
    Ok(UnitGroup { modulus: m, group })
}

/// The Kronecker symbol `(d|q)`; `(d|0)` is 1 for `d = ±1` and 0 otherwise.
pub fn kronecker_symbol(d: i64, q: i64) -> i8 {
    let mut a = d as i128;
    let mut n = q as i128;
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        // (a|2) = 1 for a ≡ ±1 mod 8, -1 for a ≡ ±3 mod 8
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a|n) for odd positive n
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A condition on primes `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// `q mod modulus` lies in `residues`.
    Congruence { modulus: u64, residues: Vec<u64> },
    /// `(d|q) = +1`, i.e. `q` splits in `Q(√d)`.
    KroneckerSplit { d: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveCondition {
    pub kind: ConditionKind,
    pub description: String,
}

impl SieveCondition {
    /// `q ≡ r (mod m)` for any listed `r`; residues must be units mod `m`.
    pub fn congruence(modulus: u64, residues: &[u64]) -> Result<Self, GroupError> {
        if modulus == 0 {
            return Err(GroupError::InvalidCondition(
                "modulus must be positive".into(),
            ));
        }
        let mut residues: Vec<u64> = residues.iter().map(|r| r % modulus).collect();
        residues.sort_unstable();
        residues.dedup();
        if let Some(r) = residues.iter().find(|&&r| gcd(r, modulus) != 1) {
            return Err(GroupError::InvalidCondition(format!(
                "residue {r} is not a unit mod {modulus}"
            )));
        }
        let description = match residues.as_slice() {
            [r] => format!("q ≡ {r} mod {modulus}"),
            rs => format!("q mod {modulus} ∈ {rs:?}"),
        };
        Ok(SieveCondition {
            kind: ConditionKind::Congruence { modulus, residues },
            description,
        })
    }

    pub fn kronecker_split(d: i64) -> Result<Self, GroupError> {
        if d == 0 {
            return Err(GroupError::InvalidCondition("d must be nonzero".into()));
        }
        Ok(SieveCondition {
            kind: ConditionKind::KroneckerSplit { d },
            description: format!("({d}|q) = 1"),
        })
    }

    pub fn holds(&self, q: u64) -> bool {
        match &self.kind {
            ConditionKind::Congruence { modulus, residues } => {
                residues.binary_search(&(q % modulus)).is_ok()
            }
            ConditionKind::KroneckerSplit { d } => kronecker_symbol(*d, q as i64) == 1,
        }
    }

    /// The same condition restated on residues coprime to its modulus.
    /// `(d|·)` restricted to units is periodic mod `4|d|`, so the table is
    /// built by direct evaluation over one period.
    pub fn to_congruence(&self) -> (u64, Vec<u64>) {
        match &self.kind {
            ConditionKind::Congruence { modulus, residues } => (*modulus, residues.clone()),
            ConditionKind::KroneckerSplit { d } => {
                let m = 4 * d.unsigned_abs();
                let residues = (1..m)
                    .filter(|&r| gcd(r, m) == 1 && kronecker_symbol(*d, r as i64) == 1)
                    .collect();
                (m, residues)
            }
        }
    }
}

impl fmt::Display for SieveCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)
    }
}

/// Exact Dirichlet density of the primes meeting every condition.
pub fn sieve_density(conditions: &[SieveCondition]) -> Result<BigRational, GroupError> {
    let tables: Vec<(u64, Vec<bool>)> = conditions
        .iter()
        .map(|c| {
            let (m, residues) = c.to_congruence();
            let mut mask = vec![false; m as usize];
            for r in residues {
                mask[r as usize] = true;
            }
            (m, mask)
        })
        .collect();
    let mut modulus = 1u64;
    for (m, _) in &tables {
        modulus = lcm(modulus, *m);
        if modulus > SIEVE_MODULUS_CAP {
            return Err(GroupError::ModulusCap(modulus));
        }
    }
    let hits = par::count_range(modulus, |r| {
        gcd(r, modulus) == 1 && tables.iter().all(|(m, mask)| mask[(r % m) as usize])
    });
    if hits == 0 {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(euler_phi(modulus)),
    ))
}

/// Whether `q` meets every condition.
pub fn satisfies_all(conditions: &[SieveCondition], q: u64) -> bool {
    conditions.iter().all(|c| c.holds(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat_frac;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3).unwrap()
    }

    fn perm(g: &FiniteGroup, p: &[usize]) -> usize {
        g.find_permutation(p).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(coset_orbit_splitting(&z4, &[0], 1).unwrap(), vec![4]);
        assert_eq!(coset_orbit_splitting(&z4, &[0], 2).unwrap(), vec![2, 2]);
        let g = s3();
        let t = perm(&g, &[1, 0, 2]);
        let c = perm(&g, &[1, 2, 0]);
        let h = g.generated(&[t]).unwrap();
        assert_eq!(coset_orbit_splitting(&g, &h, c).unwrap(), vec![3]);
        assert!(matches!(
            coset_orbit_splitting(&g, &[0, c], t),
            Err(GroupError::NotSubgroup(_))
        ));
    }

    #[test]
    fn density_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(density_of_degree(&z2, &[0], 2).unwrap(), rat_frac(1, 2));
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(density_of_degree(&z4, &[0], 4).unwrap(), rat_frac(1, 2));
        let g = s3();
        let h = g.generated(&[perm(&g, &[1, 0, 2])]).unwrap();
        assert_eq!(density_of_degree(&g, &h, 1).unwrap(), rat_frac(2, 3));
    }

    #[test]
    fn unit_group_examples() {
        let u5 = unit_group(5).unwrap();
        assert_eq!(u5.group.order(), 4);
        assert_eq!(u5.invariant_factors(), vec![4]);
        let u8 = unit_group(8).unwrap();
        assert_eq!(u8.invariant_factors(), vec![2, 2]);
        assert!(u8.group.elements().all(|a| u8.group.pow(a, 2) == 0));
        let u25 = unit_group(25).unwrap();
        assert_eq!(u25.group.element_order(u25.element(2).unwrap()), 20);
        assert_eq!(u25.invariant_factors(), vec![20]);
        assert_eq!(unit_group(24).unwrap().invariant_factors(), vec![2, 2, 2]);
        assert_eq!(unit_group(2).unwrap().group.order(), 1);
        assert_eq!(unit_group(63).unwrap().invariant_factors(), vec![6, 6]);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(5, 11), 1);
        assert_eq!(kronecker_symbol(5, 13), -1);
        assert_eq!(kronecker_symbol(15, 5), 0);
        assert_eq!(kronecker_symbol(-1, 3), -1);
        assert_eq!(kronecker_symbol(-1, 5), 1);
        assert_eq!(kronecker_symbol(2, 7), 1);
        assert_eq!(kronecker_symbol(3, 2), -1);
        assert_eq!(kronecker_symbol(-3, -1), -1);
        assert_eq!(kronecker_symbol(1, 0), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for q in crate::primes::primes_in_range(3, 500) {
            for d in -60i64..=60 {
                let r = d.rem_euclid(q as i64) as u64;
                let euler = crate::algebra::arith::pow_mod(r, (q - 1) / 2, q);
                let expect = match euler {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker_symbol(d, q as i64), expect, "({d}|{q})");
            }
        }
    }

    #[test]
    fn sieve_examples() {
        let c25 = SieveCondition::congruence(25, &[4]).unwrap();
        assert_eq!(
            sieve_density(std::slice::from_ref(&c25)).unwrap(),
            rat_frac(1, 20)
        );
        let i = SieveCondition::kronecker_split(-1).unwrap();
        assert_eq!(sieve_density(&[c25, i]).unwrap(), rat_frac(1, 40));
        let both = [
            SieveCondition::kronecker_split(5).unwrap(),
            SieveCondition::kronecker_split(-5).unwrap(),
        ];
        assert_eq!(sieve_density(&both).unwrap(), rat_frac(1, 4));
        let clash = [
            SieveCondition::congruence(4, &[1]).unwrap(),
            SieveCondition::congruence(8, &[3]).unwrap(),
        ];
        assert_eq!(sieve_density(&clash).unwrap(), BigRational::zero());
        assert!(SieveCondition::congruence(10, &[5]).is_err());
        assert!(SieveCondition::kronecker_split(0).is_err());
    }

    #[test]
    fn congruence_table_agrees_with_symbol_on_primes() {
        for d in [-7i64, -5, -3, -1, 2, 3, 5, 6, 10, 12, -20] {
            let c = SieveCondition::kronecker_split(d).unwrap();
            let (m, residues) = c.to_congruence();
            for q in crate::primes::primes_in_range(2, 5000) {
                if gcd(q, m) != 1 {
                    continue;
                }
                assert_eq!(residues.contains(&(q % m)), c.holds(q), "d={d} q={q}");
            }
        }
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).is_ok());
        let k = FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(3).unwrap(),
        )
        .unwrap();
        assert!(k.is_abelian());
        assert_eq!(k.element_order(k.mul(3, 1)), 6);
        assert!(!s3().is_abelian());
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
    }
}
