//! Congruences in `Z[X] / (1 + X + ... + X^{p-1})` with coefficients reduced
//! modulo a fixed bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_odd_prime(p: u32) -> Result<()> {
    if p == 2 || !crate::params::is_prime(p as u64) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// An element of `Z[X]/Phi_p` in the basis `1, X, ..., X^{p-2}`, coefficients mod `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElem {
    p: usize,
    modulus: BigInt,
    coeffs: Vec<BigInt>,
}

impl CyclotomicElem {
    pub fn new(p: u32, modulus: BigInt, coeffs: &[BigInt]) -> CyclotomicElem {
        let p = p as usize;
        // reduce X^k for k >= p-1 using X^p = 1 and X^{p-1} = -(1 + ... + X^{p-2})
        let mut full = vec![BigInt::zero(); p];
        for (k, c) in coeffs.iter().enumerate() {
            full[k % p] += c;
        }
        let top = full[p - 1].clone();
        let coeffs = full[..p - 1]
            .iter()
            .map(|c| (c - &top).mod_floor(&modulus))
            .collect();
        CyclotomicElem { p, modulus, coeffs }
    }

    pub fn constant(p: u32, modulus: BigInt, c: BigInt) -> CyclotomicElem {
        CyclotomicElem::new(p, modulus, &[c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, other: &CyclotomicElem) -> CyclotomicElem {
        let n = self.p - 1;
        let mut prod = vec![BigInt::zero(); 2 * n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        CyclotomicElem::new(self.p as u32, self.modulus.clone(), &prod)
    }

    pub fn pow(&self, mut k: u64) -> CyclotomicElem {
        let mut acc = CyclotomicElem::constant(self.p as u32, self.modulus.clone(), BigInt::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

/// `(X - 1)^{p(p-1)} = -p^p` modulo `p^{p+1}`.
pub fn verify_t_congruence(p: u32) -> Result<bool> {
    check_odd_prime(p)?;
    let pb = BigInt::from(p);
    let modulus = pb.pow(p + 1);
    let x_minus_one = CyclotomicElem::new(p, modulus.clone(), &[BigInt::from(-1), BigInt::one()]);
    let lhs = x_minus_one.pow(u64::from(p) * u64::from(p - 1));
    let rhs = CyclotomicElem::constant(p, modulus, -pb.pow(p));
    Ok(lhs == rhs)
}

/// `a_i = (-1)^i C(p-1, i) - 1` for `i = 0..p-2`.
pub fn a_coefficients(p: u32) -> Result<Vec<BigInt>> {
    check_odd_prime(p)?;
    let mut binom = BigInt::one();
    let mut out = Vec::with_capacity(p as usize - 1);
    for i in 0..p - 1 {
        let signed = if i % 2 == 0 { binom.clone() } else { -binom.clone() };
        out.push(signed - 1);
        binom = binom * (p - 1 - i) / (i + 1);
    }
    Ok(out)
}

/// `b_i = a_i / p` and `sum b_i = -1`.
pub fn verify_b_sum(p: u32) -> Result<bool> {
    let pb = BigInt::from(p);
    let mut sum = BigInt::zero();
    for (i, a) in a_coefficients(p)?.iter().enumerate() {
        let (b, rem) = a.div_rem(&pb);
        if !rem.is_zero() {
            return Err(Error::Invariant(format!("p does not divide a_{i} = {a}")));
        }
        sum += b;
    }
    Ok(sum == BigInt::from(-1))
}
