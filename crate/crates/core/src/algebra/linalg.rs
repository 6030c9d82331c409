//! Dense linear algebra over Q.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduce `rows` to reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Matrix) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..ncols {
                    let t = &factor * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &Matrix) -> usize {
    let mut m = rows.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn kernel(a: &Matrix) -> Vec<Vec<BigRational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// A solution of `A x = b`, if one exists.
pub fn solve(a: &Matrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Some(x)
}

/// Incrementally maintained echelon basis of a subspace of Q^n.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        EchelonBasis::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if !v[*pc].is_zero() {
                let factor = v[*pc].clone();
                for (vj, rj) in v.iter_mut().zip(row) {
                    *vj -= &factor * rj;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Add `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let v = self.reduce(v);
        let Some(pc) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[pc].recip();
        let v: Vec<BigRational> = v.into_iter().map(|c| c * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[pc].is_zero() {
                let factor = row[pc].clone();
                for (rj, vj) in row.iter_mut().zip(&v) {
                    *rj -= &factor * vj;
                }
            }
        }
        self.rows.push((pc, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&c| rat(c)).collect())
            .collect()
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        for row in &a {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        let x = solve(&a, &[rat(6), rat(12), rat(2)]).unwrap();
        assert_eq!(&a[2][0] * &x[0] + &a[2][2] * &x[2], rat(2));
        assert!(solve(&a, &[rat(1), rat(0), rat(0)]).is_none());
    }

    #[test]
    fn echelon_membership() {
        let mut b = EchelonBasis::new();
        assert!(b.insert(&[rat(1), rat(1), rat(0)]));
        assert!(b.insert(&[rat(0), rat(1), rat(1)]));
        assert!(!b.insert(&[rat(1), rat(2), rat(1)]));
        assert!(b.contains(&[rat(2), rat(3), rat(1)]));
        assert!(!b.contains(&[rat(0), rat(0), rat(1)]));
        assert_eq!(b.dim(), 2);
    }
}
