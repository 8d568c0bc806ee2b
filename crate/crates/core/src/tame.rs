//! Tame inertia characters attached to simple objects, and the system
//! `x_i^p = w pi^{m_i} x_{i+1}` solved in a monomial model.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::decomposition::jordan_holder;
use crate::error::{invariant, Error, Result};
use crate::field::{Field, FieldElem};
use crate::module::BreuilModule;
use crate::params::GlobalParams;
use crate::simples::{classifying_rational, SimpleDescriptor};

fn overflow() -> Error {
    Error::Domain("exponent arithmetic overflows 128 bits".into())
}

fn pow_checked(p: u128, h: usize) -> Result<u128> {
    p.checked_pow(h as u32).ok_or_else(overflow)
}

/// `m_i = er - n_i` and `s_i = sum_j m_{i+j} p^{h-1-j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub m: Vec<usize>,
    pub s: Vec<u128>,
}

pub fn weight_vector(desc: &SimpleDescriptor) -> Result<WeightVector> {
    let params = desc.params();
    let er = params.er();
    let p = params.p as u128;
    let h = desc.period();
    let m: Vec<usize> = desc.digits().iter().map(|&n| er - n).collect();
    let mut s = Vec::with_capacity(h);
    for i in 0..h {
        let mut acc: u128 = 0;
        for j in 0..h {
            acc = acc
                .checked_mul(p)
                .and_then(|x| x.checked_add(m[(i + j) % h] as u128))
                .ok_or_else(overflow)?;
        }
        s.push(acc);
    }
    Ok(WeightVector { m, s })
}

/// Checks `p s_i = s_{i+1} + m_i (p^h - 1)` for every `i`.
pub fn weight_recursion_holds(params: GlobalParams, w: &WeightVector) -> Result<bool> {
    let h = w.m.len();
    let p = params.p as u128;
    let q = pow_checked(p, h)? - 1;
    for i in 0..h {
        let lhs = p.checked_mul(w.s[i]).ok_or_else(overflow)?;
        let rhs = (w.m[i] as u128)
            .checked_mul(q)
            .and_then(|x| x.checked_add(w.s[(i + 1) % h]))
            .ok_or_else(overflow)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A character of tame inertia with values in `F_{p^level}^*`, given by its
/// exponent on a fundamental character of that level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TameCharacter {
    pub level: usize,
    pub exponent: u128,
}

impl TameCharacter {
    /// Minimal level, then minimal exponent over the Frobenius orbit.
    pub fn canonical(p: u32, level: usize, exponent: u128) -> Result<TameCharacter> {
        if level == 0 {
            return Err(Error::Domain("character level must be positive".into()));
        }
        let p = p as u128;
        let q = pow_checked(p, level)? - 1;
        let s = exponent % q;
        for l in (1..=level).filter(|l| level % l == 0) {
            let ql = pow_checked(p, l)? - 1;
            let ratio = q / ql;
            if s % ratio == 0 {
                let reduced = s / ratio;
                let mut best = reduced;
                let mut x = reduced;
                for _ in 0..l {
                    x = (x * p) % ql;
                    best = best.min(x);
                }
                return Ok(TameCharacter { level: l, exponent: best });
            }
        }
        unreachable!("level itself always divides")
    }

    /// Base-`p` digits of the exponent at its level, most significant first.
    pub fn digits(&self, p: u32) -> Vec<usize> {
        let p = p as u128;
        let mut x = self.exponent;
        let mut out = vec![0; self.level];
        for slot in out.iter_mut().rev() {
            *slot = (x % p) as usize;
            x /= p;
        }
        out
    }
}

pub fn tame_character(desc: &SimpleDescriptor) -> Result<TameCharacter> {
    let w = weight_vector(desc)?;
    TameCharacter::canonical(desc.params().p, desc.period(), w.s[0])
}

/// Characters of the Jordan-Hölder factors, in factor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaWeights {
    pub factors: Vec<SimpleDescriptor>,
    pub characters: Vec<TameCharacter>,
    pub weights: Vec<Vec<usize>>,
    /// Every digit of every exponent lies in `[0, er]`.
    pub within_bound: bool,
}

impl InertiaWeights {
    pub fn total_level(&self) -> usize {
        self.characters.iter().map(|c| c.level).sum()
    }
}

pub fn inertia_weights(m: &BreuilModule) -> Result<InertiaWeights> {
    let params = m.params();
    let er = params.er();
    let jh = jordan_holder(m)?;
    let mut characters = Vec::new();
    let mut weights = Vec::new();
    for f in &jh.factors {
        characters.push(tame_character(f)?);
        weights.push(weight_vector(f)?.m);
    }
    let within_bound = characters.iter().all(|c| c.digits(params.p).iter().all(|&d| d <= er))
        && weights.iter().flatten().all(|&w| w <= er);
    if !within_bound {
        return Err(invariant("inertia weight outside [0, er]"));
    }
    Ok(InertiaWeights {
        factors: jh.factors,
        characters,
        weights,
        within_bound,
    })
}

/// `s_i = (p^h - 1) (er/(p-1) - t_i)` with `t_i` the classifying rational of
/// the `i`-th rotation, in exact arithmetic.
pub fn rational_character_identity(desc: &SimpleDescriptor) -> Result<bool> {
    let params = desc.params();
    let h = desc.period();
    let w = weight_vector(desc)?;
    let q: BigInt = BigInt::from(params.p).pow(h as u32) - 1;
    let slope = BigRational::new(BigInt::from(params.er()), BigInt::from(params.p - 1));
    for i in 0..h {
        let t = classifying_rational(&desc.rotate(i)).to_rational();
        let rhs = BigRational::from_integer(q.clone()) * (slope.clone() - t);
        if rhs != BigRational::from_integer(BigInt::from(w.s[i])) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `coeff * eta^{eta_exponent}` in `O/p`, where `eta^{p^h - 1}` is a uniformizer
/// of valuation `1/e`. It is zero once the exponent reaches `e (p^h - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: FieldElem,
    pub eta_exponent: u128,
}

/// The tuple `x_i = w^i eps^{p^i} eta^{s_i}`, `i = 1..h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSolution {
    pub eps: FieldElem,
    /// `eps = g^log` for the fixed generator `g`; `None` for the zero solution.
    pub eps_log: Option<u128>,
    pub s: Vec<u128>,
    pub sign: i8,
}

/// Largest multiplicative group order handled by [`SystemS`].
pub const MAX_SYSTEM_FIELD: u128 = 1 << 26;

/// Arithmetic context of the system attached to one simple object.
#[derive(Clone, Debug)]
pub struct SystemS {
    pub desc: SimpleDescriptor,
    pub sign: i8,
    pub field: std::sync::Arc<Field>,
    pub generator: FieldElem,
    weights: WeightVector,
    zero_threshold: u128,
    logs: Vec<u32>,
}

impl SystemS {
    pub fn new(desc: &SimpleDescriptor, sign: i8) -> Result<SystemS> {
        if sign != 1 && sign != -1 {
            return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}")));
        }
        let params = desc.params();
        let h = desc.period();
        let field = Field::get(params.p, 2 * h)?;
        let generator = field.generator()?;
        let q = pow_checked(params.p as u128, h)? - 1;
        let order = (q + 1) * (q + 1) - 1;
        if order > MAX_SYSTEM_FIELD {
            return Err(Error::Domain(format!("F_{{p^{}}} is too large for the monomial model", 2 * h)));
        }
        let mut logs = vec![0u32; order as usize + 1];
        let mut acc = field.one();
        for k in 0..order {
            logs[field.to_index(acc) as usize] = k as u32;
            acc = field.mul(acc, generator);
        }
        Ok(SystemS {
            desc: desc.clone(),
            sign,
            field,
            generator,
            weights: weight_vector(desc)?,
            zero_threshold: (params.e as u128) * q,
            logs,
        })
    }

    fn sign_elem(&self) -> FieldElem {
        self.field.from_int(self.sign as i64)
    }

    fn normalize(&self, x: Monomial) -> Monomial {
        if x.coeff.is_zero() || x.eta_exponent >= self.zero_threshold {
            Monomial {
                coeff: FieldElem::ZERO,
                eta_exponent: 0,
            }
        } else {
            x
        }
    }

    fn mul(&self, a: Monomial, b: Monomial) -> Monomial {
        self.normalize(Monomial {
            coeff: self.field.mul(a.coeff, b.coeff),
            eta_exponent: a.eta_exponent + b.eta_exponent,
        })
    }

    fn pow_p(&self, a: Monomial) -> Monomial {
        let p = self.field.p() as u128;
        self.normalize(Monomial {
            coeff: self.field.frob(a.coeff),
            eta_exponent: a.eta_exponent * p,
        })
    }

    /// The components `x_1..x_h` of a solution.
    pub fn components(&self, sol: &MonomialSolution) -> Vec<Monomial> {
        let f = &self.field;
        let w = self.sign_elem();
        let mut eps_power = sol.eps;
        let mut out = Vec::with_capacity(sol.s.len());
        for (i, &s) in sol.s.iter().enumerate() {
            eps_power = f.frob(eps_power);
            let coeff = f.mul(f.pow(w, (i + 1) as u128), eps_power);
            out.push(self.normalize(Monomial { coeff, eta_exponent: s }));
        }
        out
    }

    /// `x_i^p = w pi^{m_i} x_{i+1}` for all `i`, indices mod `h`.
    pub fn satisfies(&self, xs: &[Monomial]) -> bool {
        let h = xs.len();
        let q = self.zero_threshold / self.desc.params().e as u128;
        (0..h).all(|i| {
            let lhs = self.pow_p(xs[i]);
            let factor = Monomial {
                coeff: self.sign_elem(),
                eta_exponent: self.weights.m[i] as u128 * q,
            };
            let rhs = self.mul(factor, xs[(i + 1) % h]);
            lhs == rhs
        })
    }

    /// Zero and the `p^h - 1` tuples coming from roots of `X^{p^h-1} = w^h`.
    pub fn solutions(&self) -> Result<Vec<MonomialSolution>> {
        let f = &self.field;
        let h = self.desc.period();
        let p = f.p() as u128;
        let ph = pow_checked(p, h)?;
        let order = ph.checked_mul(ph).ok_or_else(overflow)? - 1;
        let target_is_one = self.sign == 1 || h % 2 == 0;
        let offset = if target_is_one { 0 } else { (ph + 1) / 2 };
        let mut out = vec![MonomialSolution {
            eps: FieldElem::ZERO,
            eps_log: None,
            s: self.weights.s.clone(),
            sign: self.sign,
        }];
        for k in 0..ph - 1 {
            let log = (offset + k * (ph + 1)) % order;
            out.push(MonomialSolution {
                eps: f.pow(self.generator, log),
                eps_log: Some(log),
                s: self.weights.s.clone(),
                sign: self.sign,
            });
        }
        Ok(out)
    }

    /// `x - y` componentwise, when it is again a tuple of the same shape.
    pub fn difference(&self, a: &MonomialSolution, b: &MonomialSolution) -> MonomialSolution {
        let eps = self.field.sub(a.eps, b.eps);
        let eps_log = if eps.is_zero() {
            None
        } else {
            Some(self.discrete_log(eps))
        };
        MonomialSolution {
            eps,
            eps_log,
            s: a.s.clone(),
            sign: a.sign,
        }
    }

    /// `log_g x` for nonzero `x`.
    pub fn discrete_log(&self, x: FieldElem) -> u128 {
        self.logs[self.field.to_index(x) as usize] as u128
    }

    /// Primitive `(p^h - 1)`-th root of unity `g^{p^h + 1}`.
    pub fn zeta(&self) -> Result<FieldElem> {
        let ph = pow_checked(self.field.p() as u128, self.desc.period())?;
        Ok(self.field.pow(self.generator, ph + 1))
    }

    /// Action of `zeta^k` on `eta`: `x_i -> zeta^{k s_i} x_i`.
    pub fn galois_orbit(&self, sol: &MonomialSolution, zeta_power: u128) -> Result<MonomialSolution> {
        let h = self.desc.period();
        let q = pow_checked(self.field.p() as u128, h)? - 1;
        let k = zeta_power % q;
        let scale = self.field.pow(self.zeta()?, (k * (self.weights.s[h - 1] % q)) % q);
        let eps = self.field.mul(sol.eps, scale);
        let eps_log = if eps.is_zero() {
            None
        } else {
            let ph = q + 1;
            let order = ph * ph - 1;
            sol.eps_log.map(|l| (l + (ph + 1) * ((k * (self.weights.s[h - 1] % q)) % q)) % order)
        };
        Ok(MonomialSolution {
            eps,
            eps_log,
            s: sol.s.clone(),
            sign: sol.sign,
        })
    }

    /// Exponent `j` with `x_1' = zeta^j x_1` for the orbit step `zeta_power = 1`.
    pub fn character_exponent(&self, sol: &MonomialSolution) -> Result<u128> {
        let moved = self.galois_orbit(sol, 1)?;
        let a = self.components(sol)[0].coeff;
        let b = self.components(&moved)[0].coeff;
        let ratio = self.field.div(b, a)?;
        let zeta = self.zeta()?;
        let mut acc = self.field.one();
        let mut j = 0u128;
        while acc != ratio {
            acc = self.field.mul(acc, zeta);
            j += 1;
        }
        Ok(j)
    }
}

pub fn solve_system_s(desc: &SimpleDescriptor, sign: i8) -> Result<Vec<MonomialSolution>> {
    SystemS::new(desc, sign)?.solutions()
}

/// Whether every base-`p` digit of the purely periodic expansion of the
/// fractional part of `t` lies in `[0, er]`.
pub fn a_ss_exponent_test(params: GlobalParams, t: &BigRational) -> Result<bool> {
    if t.is_negative() || *t >= BigRational::from_integer(BigInt::from(params.e)) {
        return Err(Error::Domain(format!("{t} is outside [0, e)")));
    }
    let p = BigInt::from(params.p);
    let den = t.denom().clone();
    if (&den % &p).is_zero() {
        return Err(Error::Domain(format!("denominator of {t} is divisible by p")));
    }
    let frac = t - t.floor();
    if frac.is_zero() {
        return Ok(true);
    }
    // frac = a / (p^L - 1) with L the order of p modulo the denominator
    let mut len = 1u32;
    let mut pw = &p % &den;
    while !pw.is_one() && !(den.is_one()) {
        pw = (pw * &p) % &den;
        len += 1;
    }
    let q = p.pow(len) - 1;
    let a: BigInt = frac.numer() * (&q / frac.denom());
    let mut a = a.to_biguint().expect("fraction is positive");
    let pu = BigUint::from(params.p);
    let er = params.er();
    for _ in 0..len {
        let (rest, digit) = a.div_rem(&pu);
        if digit.to_usize().expect("digit below p") > er {
            return Ok(false);
        }
        a = rest;
    }
    Ok(true)
}
