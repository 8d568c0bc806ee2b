//! Dense matrices over `A` and their Smith normal form.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::ring::{APoly, CoeffRing};

/// Column vector over `A`.
pub type AVec = Vec<APoly>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AMatrix {
    rows: usize,
    cols: usize,
    data: Vec<APoly>,
}

impl AMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &APoly {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut APoly {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: APoly) {
        self.data[i * self.cols + j] = a;
    }

    pub fn column(&self, j: usize) -> AVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> AVec {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &APoly> {
        self.data.iter()
    }

    pub fn from_rows(rows: Vec<AVec>, cols: usize) -> Result<AMatrix> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a {cols}-column matrix", row.len())));
            }
            data.extend(row);
        }
        Ok(AMatrix { rows: n, cols, data })
    }

    /// Matrix with the given columns, each of length `rows`.
    pub fn from_columns(columns: &[AVec], rows: usize) -> AMatrix {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for col in columns {
                data.push(col[i].clone());
            }
        }
        AMatrix { rows, cols, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Columns `start..end`.
    pub fn column_range(&self, start: usize, end: usize) -> AMatrix {
        let cols: Vec<AVec> = (start..end).map(|j| self.column(j)).collect();
        AMatrix::from_columns(&cols, self.rows)
    }

    /// Rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> AMatrix {
        let rows: Vec<AVec> = (start..end).map(|i| self.row(i)).collect();
        AMatrix::from_rows(rows, self.cols).expect("rows of equal length")
    }
}

/// `U * M * V = diag(u^{a_1}, u^{a_2}, ...)` with `a_1 <= a_2 <= ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: AMatrix,
    pub u_inv: AMatrix,
    pub v: AMatrix,
    pub v_inv: AMatrix,
    /// Diagonal exponents, one per index below `min(rows, cols)`; zero is `ep`.
    pub exponents: Vec<usize>,
}

impl CoeffRing {
    pub fn mat_zero(&self, rows: usize, cols: usize) -> AMatrix {
        AMatrix {
            rows,
            cols,
            data: vec![self.zero(); rows * cols],
        }
    }

    pub fn mat_identity(&self, n: usize) -> AMatrix {
        let mut m = self.mat_zero(n, n);
        for i in 0..n {
            m.set(i, i, self.one());
        }
        m
    }

    pub fn mat_mul(&self, a: &AMatrix, b: &AMatrix) -> AMatrix {
        assert_eq!(a.cols, b.rows, "matrix product shape mismatch");
        let mut out = self.mat_zero(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if !y.is_zero() {
                        self.add_mul_assign(out.get_mut(i, j), x, y);
                    }
                }
            }
        }
        out
    }

    pub fn mat_add(&self, a: &AMatrix, b: &AMatrix) -> AMatrix {
        self.zip_entries(a, b, |x, y| self.add(x, y))
    }

    pub fn mat_sub(&self, a: &AMatrix, b: &AMatrix) -> AMatrix {
        self.zip_entries(a, b, |x, y| self.sub(x, y))
    }

    fn zip_entries(&self, a: &AMatrix, b: &AMatrix, op: impl Fn(&APoly, &APoly) -> APoly) -> AMatrix {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols), "matrix shape mismatch");
        AMatrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| op(x, y)).collect(),
        }
    }

    pub fn mat_map(&self, a: &AMatrix, op: impl Fn(&APoly) -> APoly) -> AMatrix {
        AMatrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().map(op).collect(),
        }
    }

    pub fn mat_neg(&self, a: &AMatrix) -> AMatrix {
        self.mat_map(a, |x| self.neg(x))
    }

    pub fn mat_scale(&self, c: FieldElem, a: &AMatrix) -> AMatrix {
        self.mat_map(a, |x| self.scale(c, x))
    }

    pub fn mat_frobenius(&self, a: &AMatrix) -> AMatrix {
        self.mat_map(a, |x| self.frobenius(x))
    }

    pub fn mat_derivation(&self, a: &AMatrix) -> AMatrix {
        self.mat_map(a, |x| self.derivation(x))
    }

    pub fn mat_vec(&self, a: &AMatrix, v: &[APoly]) -> AVec {
        assert_eq!(a.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![self.zero(); a.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            for (k, x) in v.iter().enumerate() {
                let y = a.get(i, k);
                if !y.is_zero() && !x.is_zero() {
                    self.add_mul_assign(slot, y, x);
                }
            }
        }
        out
    }

    pub fn vec_add(&self, a: &[APoly], b: &[APoly]) -> AVec {
        a.iter().zip(b).map(|(x, y)| self.add(x, y)).collect()
    }

    pub fn vec_sub(&self, a: &[APoly], b: &[APoly]) -> AVec {
        a.iter().zip(b).map(|(x, y)| self.sub(x, y)).collect()
    }

    pub fn vec_mul(&self, c: &APoly, v: &[APoly]) -> AVec {
        v.iter().map(|x| self.mul(c, x)).collect()
    }

    pub fn vec_scale(&self, c: FieldElem, v: &[APoly]) -> AVec {
        v.iter().map(|x| self.scale(c, x)).collect()
    }

    pub fn vec_shift_up(&self, v: &[APoly], k: usize) -> AVec {
        v.iter().map(|x| self.shift_up(x, k)).collect()
    }

    pub fn vec_zero(&self, n: usize) -> AVec {
        vec![self.zero(); n]
    }

    /// `e_i` in `A^n`.
    pub fn vec_unit(&self, n: usize, i: usize) -> AVec {
        let mut v = self.vec_zero(n);
        v[i] = self.one();
        v
    }

    /// Minimal valuation over the entries (`ep` for the zero vector).
    pub fn vec_ord(&self, v: &[APoly]) -> usize {
        v.iter().map(|x| x.ord()).min().unwrap_or(self.ep())
    }

    pub fn block_diag(&self, a: &AMatrix, b: &AMatrix) -> AMatrix {
        let mut out = self.mat_zero(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        out
    }

    pub fn mat_random<R: Rng + ?Sized>(&self, rows: usize, cols: usize, rng: &mut R) -> AMatrix {
        AMatrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| self.random(rng)).collect(),
        }
    }

    /// Random invertible matrix (rejection sampling on the residue matrix).
    pub fn mat_random_invertible<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> AMatrix {
        loop {
            let m = self.mat_random(n, n, rng);
            if self.mat_is_invertible(&m) {
                return m;
            }
        }
    }

    pub fn mat_is_invertible(&self, a: &AMatrix) -> bool {
        a.rows == a.cols && self.mat_inverse(a).is_ok()
    }

    /// Gauss-Jordan inversion pivoting on units.
    pub fn mat_inverse(&self, a: &AMatrix) -> Result<AMatrix> {
        if a.rows != a.cols {
            return Err(Error::NotInvertible);
        }
        let n = a.rows;
        let mut m = a.clone();
        let mut inv = self.mat_identity(n);
        for t in 0..n {
            let pivot = (t..n).find(|&i| self.is_unit(m.get(i, t))).ok_or(Error::NotInvertible)?;
            m.swap_rows(t, pivot);
            inv.swap_rows(t, pivot);
            let s = self.inv(m.get(t, t))?;
            for j in 0..n {
                let x = self.mul(&s, m.get(t, j));
                m.set(t, j, x);
                let y = self.mul(&s, inv.get(t, j));
                inv.set(t, j, y);
            }
            for i in 0..n {
                if i == t || m.get(i, t).is_zero() {
                    continue;
                }
                let c = m.get(i, t).clone();
                for j in 0..n {
                    let x = self.sub(m.get(i, j), &self.mul(&c, m.get(t, j)));
                    m.set(i, j, x);
                    let y = self.sub(inv.get(i, j), &self.mul(&c, inv.get(t, j)));
                    inv.set(i, j, y);
                }
            }
        }
        Ok(inv)
    }

    pub fn smith_normal_form(&self, m: &AMatrix) -> SmithForm {
        let (r, c) = (m.rows, m.cols);
        let ep = self.ep();
        let mut d = m.clone();
        let mut u = self.mat_identity(r);
        let mut u_inv = self.mat_identity(r);
        let mut v = self.mat_identity(c);
        let mut v_inv = self.mat_identity(c);
        let mut exponents = Vec::with_capacity(r.min(c));
        for t in 0..r.min(c) {
            let mut best = (ep, t, t);
            for i in t..r {
                for j in t..c {
                    let o = d.get(i, j).ord();
                    if o < best.0 {
                        best = (o, i, j);
                    }
                }
            }
            let (a, pi, pj) = best;
            if a == ep {
                exponents.resize(r.min(c), ep);
                break;
            }
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            // normalize the pivot to exactly u^a
            let unit = self.shift_down(d.get(t, t), a);
            let w_inv = self.inv(&unit).expect("pivot cofactor is a unit");
            for j in 0..c {
                let x = self.mul(&w_inv, d.get(t, j));
                d.set(t, j, x);
            }
            for j in 0..r {
                let x = self.mul(&w_inv, u.get(t, j));
                u.set(t, j, x);
                let y = self.mul(&unit, u_inv.get(j, t));
                u_inv.set(j, t, y);
            }

            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let y = self.shift_down(d.get(i, t), a);
                for j in 0..c {
                    let x = self.sub(d.get(i, j), &self.mul(&y, d.get(t, j)));
                    d.set(i, j, x);
                }
                for j in 0..r {
                    let x = self.sub(u.get(i, j), &self.mul(&y, u.get(t, j)));
                    u.set(i, j, x);
                    let z = self.add(u_inv.get(j, t), &self.mul(&y, u_inv.get(j, i)));
                    u_inv.set(j, t, z);
                }
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let y = self.shift_down(d.get(t, j), a);
                for i in 0..r {
                    let x = self.sub(d.get(i, j), &self.mul(&y, d.get(i, t)));
                    d.set(i, j, x);
                }
                for i in 0..c {
                    let x = self.sub(v.get(i, j), &self.mul(&y, v.get(i, t)));
                    v.set(i, j, x);
                    let z = self.add(v_inv.get(t, i), &self.mul(&y, v_inv.get(j, i)));
                    v_inv.set(t, i, z);
                }
            }
            exponents.push(a);
        }
        SmithForm {
            u,
            u_inv,
            v,
            v_inv,
            exponents,
        }
    }

    /// Solves `M x = b` over `A`, returning one solution if any exists.
    pub fn solve(&self, m: &AMatrix, b: &[APoly]) -> Option<AVec> {
        let snf = self.smith_normal_form(m);
        let ub = self.mat_vec(&snf.u, b);
        let k = snf.exponents.len();
        let mut w = self.vec_zero(m.cols);
        for i in 0..m.rows {
            if i < k {
                let a = snf.exponents[i];
                if ub[i].ord() < a {
                    return None;
                }
                w[i] = self.shift_down(&ub[i], a);
            } else if !ub[i].is_zero() {
                return None;
            }
        }
        Some(self.mat_vec(&snf.v, &w))
    }
}
