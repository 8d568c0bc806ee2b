//! Exact Gaussian elimination over `F_p` and over `F_{p^f}`.

use crate::field::{inv_mod, Field, FieldElem};

/// Minimal field interface needed for row reduction.
pub trait Scalars {
    type Elem: Copy + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: Self::Elem) -> bool;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem {
        self.sub(self.zero(), a)
    }
}

/// The prime field `Z/p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField(pub u32);

impl Scalars for PrimeField {
    type Elem = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: u32) -> bool {
        a == 0
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, (self.0 - b) % self.0)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        inv_mod(a as u64, self.0 as u64) as u32
    }
}

impl Scalars for Field {
    type Elem = FieldElem;
    fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }
    fn one(&self) -> FieldElem {
        Field::one(self)
    }
    fn is_zero(&self, a: FieldElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        Field::add(self, a, b)
    }
    fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        Field::sub(self, a, b)
    }
    fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        Field::mul(self, a, b)
    }
    fn inv(&self, a: FieldElem) -> FieldElem {
        Field::inv(self, a).expect("pivot is nonzero")
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<S: Scalars>(s: &S, rows: &mut Vec<Vec<S::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !s.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, found);
        let lead = s.inv(rows[r][c]);
        for x in rows[r].iter_mut().skip(c) {
            *x = s.mul(*x, lead);
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        let support: Vec<usize> = (c..pivot_row.len()).filter(|&j| !s.is_zero(pivot_row[j])).collect();
        for row in rows.iter_mut() {
            if row.is_empty() {
                continue;
            }
            let factor = row[c];
            if s.is_zero(factor) {
                continue;
            }
            for &j in &support {
                row[j] = s.sub(row[j], s.mul(factor, pivot_row[j]));
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<S: Scalars>(s: &S, rows: &[Vec<S::Elem>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(s, &mut work, ncols).len()
}

/// Basis of `{x : M x = 0}` for `M` given by its rows.
pub fn nullspace<S: Scalars>(s: &S, rows: &[Vec<S::Elem>], ncols: usize) -> Vec<Vec<S::Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(s, &mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![s.zero(); ncols];
        v[free] = s.one();
        for (row, &pc) in work.iter().zip(&pivots) {
            v[pc] = s.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Solves `M x = b`: returns a particular solution and a basis of the
/// homogeneous solutions, or `None` when inconsistent.
pub fn solve_affine<S: Scalars>(
    s: &S,
    rows: &[Vec<S::Elem>],
    rhs: &[S::Elem],
    ncols: usize,
) -> Option<(Vec<S::Elem>, Vec<Vec<S::Elem>>)> {
    let mut work: Vec<Vec<S::Elem>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let pivots = rref(s, &mut work, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![s.zero(); ncols];
    for (row, &pc) in work.iter().zip(&pivots) {
        particular[pc] = row[ncols];
    }
    Some((particular, nullspace(s, rows, ncols)))
}

/// Reduced basis of the span of the given vectors.
pub fn span_basis<S: Scalars>(s: &S, vectors: &[Vec<S::Elem>], dim: usize) -> Vec<Vec<S::Elem>> {
    let mut work = vectors.to_vec();
    rref(s, &mut work, dim);
    work
}

/// Basis of the intersection of two spans inside a space of dimension `dim`.
pub fn intersect<S: Scalars>(s: &S, a: &[Vec<S::Elem>], b: &[Vec<S::Elem>], dim: usize) -> Vec<Vec<S::Elem>> {
    // x = sum alpha_i a_i = sum beta_j b_j; solve on the stacked columns
    let a = span_basis(s, a, dim);
    let b = span_basis(s, b, dim);
    let n = a.len() + b.len();
    let rows: Vec<Vec<S::Elem>> = (0..dim)
        .map(|k| a.iter().map(|v| v[k]).chain(b.iter().map(|v| s.neg(v[k]))).collect())
        .collect();
    let kernel = nullspace(s, &rows, n);
    let vectors: Vec<Vec<S::Elem>> = kernel
        .iter()
        .map(|coef| {
            let mut x = vec![s.zero(); dim];
            for (c, v) in coef.iter().zip(&a) {
                if !s.is_zero(*c) {
                    for k in 0..dim {
                        x[k] = s.add(x[k], s.mul(*c, v[k]));
                    }
                }
            }
            x
        })
        .collect();
    span_basis(s, &vectors, dim)
}

/// True when every vector of `sub` lies in the span of `space`.
pub fn contains<S: Scalars>(s: &S, space: &[Vec<S::Elem>], sub: &[Vec<S::Elem>], dim: usize) -> bool {
    let r = rank(s, space, dim);
    let mut all = space.to_vec();
    all.extend_from_slice(sub);
    rank(s, &all, dim) == r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_over_f5() {
        let s = PrimeField(5);
        let rows = vec![vec![1, 2, 3], vec![2, 1, 1]];
        let ker = nullspace(&s, &rows, 3);
        assert_eq!(ker.len(), 1);
        for row in &rows {
            let dot = row.iter().zip(&ker[0]).fold(0, |acc, (&a, &b)| s.add(acc, s.mul(a, b)));
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn affine_solution() {
        let s = PrimeField(7);
        let rows = vec![vec![1, 1], vec![1, 6]];
        let (x, hom) = solve_affine(&s, &rows, &[3, 1], 2).unwrap();
        assert!(hom.is_empty());
        assert_eq!(s.add(x[0], x[1]), 3);
        assert_eq!(s.sub(x[0], x[1]), 1);
        assert!(solve_affine(&s, &[vec![1, 1], vec![2, 2]], &[1, 1], 2).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let s = PrimeField(3);
        let a = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let b = vec![vec![0, 1, 0], vec![0, 0, 1]];
        let i = intersect(&s, &a, &b, 3);
        assert_eq!(i, vec![vec![0, 1, 0]]);
        assert!(contains(&s, &a, &i, 3));
    }
}
