//! The truncated polynomial ring `A = F_{p^f}[u]/u^{ep}`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::params::GlobalParams;

/// Element of `A`, stored densely with exactly `ep` coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct APoly {
    coeffs: Vec<FieldElem>,
}

impl APoly {
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn set_coeff(&mut self, i: usize, c: FieldElem) {
        if i < self.coeffs.len() {
            self.coeffs[i] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// u-adic valuation, `ep` for zero.
    pub fn ord(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every nonzero coefficient sits at a multiple of `step`.
    pub fn is_sparse_in(&self, step: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| i % step == 0 || c.is_zero())
    }
}

/// Arithmetic context for `A`; cheap to clone.
#[derive(Clone, Debug)]
pub struct CoeffRing {
    params: GlobalParams,
    field: Arc<Field>,
    len: usize,
}

impl PartialEq for CoeffRing {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Eq for CoeffRing {}

impl CoeffRing {
    pub fn new(params: GlobalParams) -> Result<Self> {
        params.check()?;
        let field = Field::get(params.p, params.f as usize)?;
        Ok(CoeffRing {
            params,
            field,
            len: params.ep(),
        })
    }

    pub fn params(&self) -> GlobalParams {
        self.params
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Nilpotency index `ep`.
    pub fn ep(&self) -> usize {
        self.len
    }

    pub fn p(&self) -> usize {
        self.params.p as usize
    }

    pub fn zero(&self) -> APoly {
        APoly {
            coeffs: vec![FieldElem::ZERO; self.len],
        }
    }

    pub fn one(&self) -> APoly {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: FieldElem) -> APoly {
        self.monomial(c, 0)
    }

    /// `c u^k`, zero when `k >= ep`.
    pub fn monomial(&self, c: FieldElem, k: usize) -> APoly {
        let mut a = self.zero();
        if k < self.len {
            a.coeffs[k] = c;
        }
        a
    }

    /// `u^k`.
    pub fn u_pow(&self, k: usize) -> APoly {
        self.monomial(self.field.one(), k)
    }

    /// Builds an element from coefficients, padding with zeros; extra
    /// coefficients beyond `u^{ep}` must vanish.
    pub fn from_coeffs(&self, coeffs: Vec<FieldElem>) -> Result<APoly> {
        if coeffs.len() > self.len && coeffs[self.len..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Shape(format!("{} coefficients exceed ep = {}", coeffs.len(), self.len)));
        }
        let mut coeffs = coeffs;
        coeffs.resize(self.len, FieldElem::ZERO);
        Ok(APoly { coeffs })
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> APoly {
        let mut a = self.zero();
        for (i, &c) in coeffs.iter().enumerate().take(self.len) {
            a.coeffs[i] = self.field.from_int(c);
        }
        a
    }

    pub fn add(&self, a: &APoly, b: &APoly) -> APoly {
        let f = &self.field;
        APoly {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.add(x, y)).collect(),
        }
    }

    pub fn sub(&self, a: &APoly, b: &APoly) -> APoly {
        let f = &self.field;
        APoly {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.sub(x, y)).collect(),
        }
    }

    pub fn neg(&self, a: &APoly) -> APoly {
        let f = &self.field;
        APoly {
            coeffs: a.coeffs.iter().map(|&x| f.neg(x)).collect(),
        }
    }

    pub fn scale(&self, c: FieldElem, a: &APoly) -> APoly {
        let f = &self.field;
        APoly {
            coeffs: a.coeffs.iter().map(|&x| f.mul(c, x)).collect(),
        }
    }

    pub fn mul(&self, a: &APoly, b: &APoly) -> APoly {
        let f = &self.field;
        let n = self.len;
        let mut out = self.zero();
        let oa = a.ord();
        let ob = b.ord();
        for i in oa..n {
            let x = a.coeffs[i];
            if x.is_zero() {
                continue;
            }
            for j in ob..n - i {
                let y = b.coeffs[j];
                if !y.is_zero() {
                    out.coeffs[i + j] = f.add(out.coeffs[i + j], f.mul(x, y));
                }
            }
        }
        out
    }

    /// `a += b * c`.
    pub fn add_mul_assign(&self, a: &mut APoly, b: &APoly, c: &APoly) {
        let f = &self.field;
        let n = self.len;
        let ob = b.ord();
        let oc = c.ord();
        for i in ob..n {
            let x = b.coeffs[i];
            if x.is_zero() {
                continue;
            }
            for j in oc..n - i {
                let y = c.coeffs[j];
                if !y.is_zero() {
                    a.coeffs[i + j] = f.add(a.coeffs[i + j], f.mul(x, y));
                }
            }
        }
    }

    /// Multiplication by `u^k`.
    pub fn shift_up(&self, a: &APoly, k: usize) -> APoly {
        let mut out = self.zero();
        for i in 0..self.len.saturating_sub(k) {
            out.coeffs[i + k] = a.coeffs[i];
        }
        out
    }

    /// Drops the lowest `k` coefficients and shifts down; the top `k`
    /// coefficients of the result are zero.
    pub fn shift_down(&self, a: &APoly, k: usize) -> APoly {
        let mut out = self.zero();
        for i in k..self.len {
            out.coeffs[i - k] = a.coeffs[i];
        }
        out
    }

    /// Exact quotient by `u^k`; the representative has vanishing top coefficients.
    pub fn try_divide_by_u_power(&self, a: &APoly, k: usize) -> Result<APoly> {
        if a.ord() < k {
            return Err(Error::NotDivisible(k));
        }
        Ok(self.shift_down(a, k))
    }

    pub fn is_unit(&self, a: &APoly) -> bool {
        !a.coeffs[0].is_zero()
    }

    /// Inverse of a unit by Newton iteration `x -> x(2 - ax)`.
    pub fn inv(&self, a: &APoly) -> Result<APoly> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible);
        }
        let c0 = self.field.inv(a.coeffs[0])?;
        let mut x = self.constant(c0);
        let two = self.constant(self.field.from_int(2));
        let mut precision = 1;
        while precision < self.len {
            let ax = self.mul(a, &x);
            x = self.mul(&x, &self.sub(&two, &ax));
            precision *= 2;
        }
        Ok(x)
    }

    /// Inverse of a unit by solving for coefficients one at a time.
    pub fn inv_by_solve(&self, a: &APoly) -> Result<APoly> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible);
        }
        let f = &self.field;
        let c0 = f.inv(a.coeffs[0])?;
        let mut x = self.zero();
        x.coeffs[0] = c0;
        for k in 1..self.len {
            let mut s = f.zero();
            for i in 1..=k {
                s = f.add(s, f.mul(a.coeffs[i], x.coeffs[k - i]));
            }
            x.coeffs[k] = f.neg(f.mul(s, c0));
        }
        Ok(x)
    }

    /// `phi(sum w_i u^i) = sum w_i^p u^{ip}`.
    pub fn frobenius(&self, a: &APoly) -> APoly {
        let f = &self.field;
        let p = self.p();
        let mut out = self.zero();
        for (i, &w) in a.coeffs.iter().enumerate() {
            if i * p >= self.len {
                break;
            }
            if !w.is_zero() {
                out.coeffs[i * p] = f.frob(w);
            }
        }
        out
    }

    /// The derivation `sum w_i u^i -> sum (-i) w_i u^i`.
    pub fn derivation(&self, a: &APoly) -> APoly {
        let f = &self.field;
        APoly {
            coeffs: a
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &w)| f.scale(w, -(i as i64)))
                .collect(),
        }
    }

    /// Coefficientwise field embedding into the ring of a larger residue field.
    pub fn map_coeffs(&self, a: &APoly, map: impl Fn(FieldElem) -> FieldElem) -> APoly {
        APoly {
            coeffs: a.coeffs.iter().map(|&c| map(c)).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> APoly {
        APoly {
            coeffs: (0..self.len).map(|_| self.field.random(rng)).collect(),
        }
    }

    /// Coordinates over `F_p`: index `k * f + l` holds coefficient `l` of `u^k`.
    pub fn to_fp(&self, a: &APoly) -> Vec<u32> {
        let d = self.field.degree();
        let mut out = Vec::with_capacity(self.len * d);
        for c in &a.coeffs {
            for l in 0..d {
                out.push(c.coeff(l));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, e: u32, r: u32, f: u32) -> CoeffRing {
        CoeffRing::new(GlobalParams::new(p, e, r, f).unwrap()).unwrap()
    }

    #[test]
    fn frobenius_of_u() {
        let a = ring(5, 2, 1, 1);
        assert_eq!(a.frobenius(&a.u_pow(1)), a.u_pow(5));
        let b = ring(5, 1, 1, 1);
        assert!(b.frobenius(&b.u_pow(2)).is_zero());
    }

    #[test]
    fn units() {
        let a = ring(5, 1, 1, 1);
        assert!(a.is_unit(&a.from_ints(&[1, 1])));
        assert!(!a.is_unit(&a.u_pow(1)));
        let x = a.from_ints(&[2, 3, 0, 4]);
        assert_eq!(a.mul(&x, &a.inv(&x).unwrap()), a.one());
        assert_eq!(a.inv(&x).unwrap(), a.inv_by_solve(&x).unwrap());
    }

    #[test]
    fn derivation_examples() {
        let a = ring(5, 2, 1, 1);
        assert_eq!(a.derivation(&a.u_pow(1)), a.neg(&a.u_pow(1)));
        assert!(a.derivation(&a.one()).is_zero());
        assert!(a.derivation(&a.u_pow(5)).is_zero());
    }

    #[test]
    fn division_by_u_power() {
        let a = ring(5, 1, 1, 1);
        let x = a.from_ints(&[0, 0, 1, 2]);
        assert_eq!(a.try_divide_by_u_power(&x, 2).unwrap(), a.from_ints(&[1, 2]));
        assert!(a.try_divide_by_u_power(&x, 3).is_err());
        assert!(a.try_divide_by_u_power(&a.zero(), 5).unwrap().is_zero());
    }
}
