//! The simple objects `M(n_1, ..., n_h)`, their shift classes and classifying rationals.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::AMatrix;
use crate::module::BreuilModule;
use crate::params::GlobalParams;
use crate::ring::CoeffRing;

/// A cycle of filtration digits with exact period `h = digits.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleDescriptor {
    params: GlobalParams,
    digits: Vec<usize>,
}

impl SimpleDescriptor {
    pub fn new(params: GlobalParams, digits: Vec<usize>) -> Result<Self> {
        params.check()?;
        if digits.is_empty() {
            return Err(Error::Descriptor("empty digit cycle".into()));
        }
        let er = params.er();
        if let Some(&n) = digits.iter().find(|&&n| n > er) {
            return Err(Error::Descriptor(format!("digit {n} exceeds er = {er}")));
        }
        if exact_period(&digits) != digits.len() {
            return Err(Error::Descriptor(format!("digits {digits:?} are not of exact period {}", digits.len())));
        }
        Ok(SimpleDescriptor { params, digits })
    }

    /// Descriptor of the primitive cycle underlying `digits`.
    pub fn primitive(params: GlobalParams, digits: &[usize]) -> Result<Self> {
        let t = exact_period(digits);
        SimpleDescriptor::new(params, digits[..t].to_vec())
    }

    pub fn params(&self) -> GlobalParams {
        self.params
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn period(&self) -> usize {
        self.digits.len()
    }

    /// Cyclic shift `(n_{1+k}, ..., n_{k})`.
    pub fn rotate(&self, k: usize) -> SimpleDescriptor {
        let mut digits = self.digits.clone();
        digits.rotate_left(k % self.period());
        SimpleDescriptor {
            params: self.params,
            digits,
        }
    }

    /// The lexicographically least rotation.
    pub fn canonical(&self) -> SimpleDescriptor {
        self.rotate(least_rotation(&self.digits))
    }

    pub fn with_params(&self, params: GlobalParams) -> Result<SimpleDescriptor> {
        SimpleDescriptor::new(params, self.digits.clone())
    }
}

/// Smallest `t` such that the sequence is `t`-periodic as a cycle.
pub fn exact_period(digits: &[usize]) -> usize {
    let h = digits.len();
    (1..=h)
        .filter(|t| h % t == 0)
        .find(|&t| (0..h).all(|i| digits[i] == digits[(i + t) % h]))
        .unwrap_or(h)
}

/// Starting index of the lexicographically least rotation (Booth).
pub fn least_rotation(s: &[usize]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if sj != at(k + (i + 1) as usize) {
            // i == -1 here
            if sj < at(k) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

pub fn is_shift_equivalent(a: &SimpleDescriptor, b: &SimpleDescriptor) -> bool {
    a.period() == b.period() && a.canonical().digits == b.canonical().digits
}

/// `M(n_i)`: `phi_r(u^{n_i} e_i) = e_{i+1}` and `N = 0`.
pub fn make_simple(desc: &SimpleDescriptor) -> Result<BreuilModule> {
    let ring = CoeffRing::new(desc.params)?;
    make_simple_over(&ring, desc)
}

pub fn make_simple_over(ring: &CoeffRing, desc: &SimpleDescriptor) -> Result<BreuilModule> {
    if ring.params().er() != desc.params.er() || ring.params().p != desc.params.p {
        return Err(Error::ParamsMismatch);
    }
    let h = desc.period();
    let mut frob = ring.mat_zero(h, h);
    for i in 0..h {
        frob.set((i + 1) % h, i, ring.one());
    }
    let zero: AMatrix = ring.mat_zero(h, h);
    BreuilModule::new(ring.clone(), desc.digits.clone(), frob, zero)
}

/// Lyndon words of length `h` over `0..alphabet`, in lexicographic order.
pub fn lyndon_words(alphabet: usize, h: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if h == 0 || alphabet == 0 {
        return out;
    }
    // Fredricksen-Kessler-Maiorana (Duval's successor form)
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == h {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < h {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last + 1 == alphabet {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// One canonical descriptor per isomorphism class of simples of period `h`.
pub fn enumerate_simples(params: GlobalParams, h: usize) -> Result<Vec<SimpleDescriptor>> {
    params.check()?;
    lyndon_words(params.er() + 1, h)
        .into_iter()
        .map(|digits| SimpleDescriptor::new(params, digits))
        .collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            result = -result;
        }
        q += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `(1/h) sum_{d | h} mu(d) k^{h/d}`.
pub fn lyndon_count(alphabet: u64, h: u64) -> BigUint {
    if h == 0 {
        return BigUint::zero();
    }
    let mut acc = num_bigint::BigInt::zero();
    for d in (1..=h).filter(|d| h % d == 0) {
        let term = num_bigint::BigInt::from(alphabet).pow((h / d) as u32);
        acc += term * mobius(d);
    }
    let (q, _) = acc.div_rem(&num_bigint::BigInt::from(h));
    q.to_biguint().expect("count is non-negative")
}

/// `a / (p^h - 1)` with `a = sum n_{1+j} p^{h-1-j}`; kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassifyingRational {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl ClassifyingRational {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator.clone().into())
    }

    /// Multiplication by `p` modulo 1.
    pub fn times_p(&self, p: u32) -> ClassifyingRational {
        ClassifyingRational {
            numerator: (&self.numerator * p) % &self.denominator,
            denominator: self.denominator.clone(),
        }
    }
}

pub fn classifying_rational(desc: &SimpleDescriptor) -> ClassifyingRational {
    let p = BigUint::from(desc.params.p);
    let mut a = BigUint::zero();
    for &n in &desc.digits {
        a = a * &p + n;
    }
    let denominator = p.pow(desc.period() as u32) - BigUint::one();
    ClassifyingRational { numerator: a, denominator }
}

/// Least classifying numerator over all rotations; a complete invariant.
pub fn canonical_numerator(desc: &SimpleDescriptor) -> BigUint {
    (0..desc.period())
        .map(|k| classifying_rational(&desc.rotate(k)).numerator)
        .min()
        .expect("period is positive")
}

/// `F_{p^h}` is the endomorphism field of `M(n_i)` over an algebraically closed field.
pub fn endomorphism_field_degree(desc: &SimpleDescriptor) -> usize {
    desc.period()
}
