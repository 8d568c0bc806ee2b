//! Finite fields `F_{p^f}` in a fixed polynomial basis.
//!
//! The modulus is the first monic irreducible polynomial of degree `f` when
//! candidates `x^f + c_{f-1} x^{f-1} + ... + c_0` are ordered by the integer
//! `c_0 + c_1 p + ... + c_{f-1} p^{f-1}`. Elements are ordered the same way.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 24;

/// Coefficient vector of a field element in the basis `1, x, ..., x^{f-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem([u16; MAX_DEGREE]);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem([0; MAX_DEGREE]);

    pub fn coeff(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

pub struct Field {
    p: u32,
    degree: usize,
    /// low coefficients of the monic modulus
    modulus: Vec<u32>,
    /// negated low coefficients, used when folding `x^degree`
    fold: Vec<u64>,
    /// images `x^{ip}` of the basis under `a -> a^p`
    frob_images: Vec<FieldElem>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.degree, self.modulus)
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, usize), Arc<Field>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// Shared instance of `F_{p^degree}`.
    pub fn get(p: u32, degree: usize) -> Result<Arc<Field>> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        if !crate::params::is_prime(p as u64) || p >= 1 << 15 {
            return Err(Error::InvalidParams(format!("p = {p} is not a supported prime")));
        }
        let mut map = cache().lock().expect("field cache poisoned");
        if let Some(field) = map.get(&(p, degree)) {
            return Ok(field.clone());
        }
        let field = Arc::new(Field::build(p, degree));
        map.insert((p, degree), field.clone());
        Ok(field)
    }

    fn build(p: u32, degree: usize) -> Field {
        let modulus = if degree == 1 {
            vec![0]
        } else {
            smallest_irreducible(p, degree)
        };
        let fold = modulus.iter().map(|&c| ((p - c) % p) as u64).collect();
        let mut field = Field {
            p,
            degree,
            modulus,
            fold,
            frob_images: Vec::new(),
        };
        let x = if degree == 1 { field.one() } else { field.basis(1) };
        let xp = field.pow(x, p as u128);
        let mut images = vec![field.one()];
        for i in 1..degree {
            let prev = images[i - 1];
            images.push(field.mul(prev, xp));
        }
        field.frob_images = images;
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Low coefficients `c_0..c_{f-1}` of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements, if it fits in 64 bits.
    pub fn order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        c[0] = 1;
        FieldElem(c)
    }

    /// The basis element `x^i`.
    pub fn basis(&self, i: usize) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        c[i] = 1;
        FieldElem(c)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        c[0] = n.rem_euclid(self.p as i64) as u16;
        FieldElem(c)
    }

    /// Builds an element from coefficients, reducing each mod p.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElem> {
        if coeffs.len() > self.degree {
            return Err(Error::Shape(format!(
                "{} coefficients for a field of degree {}",
                coeffs.len(),
                self.degree
            )));
        }
        let mut c = [0u16; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v.rem_euclid(self.p as i64) as u16;
        }
        Ok(FieldElem(c))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        a.0[..self.degree].iter().map(|&c| c as u32).collect()
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        let p = self.p;
        for i in 0..self.degree {
            let s = a.0[i] as u32 + b.0[i] as u32;
            c[i] = if s >= p { s - p } else { s } as u16;
        }
        FieldElem(c)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        let p = self.p;
        for i in 0..self.degree {
            let s = a.0[i] as u32 + p - b.0[i] as u32;
            c[i] = if s >= p { s - p } else { s } as u16;
        }
        FieldElem(c)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.sub(FieldElem::ZERO, a)
    }

    /// Multiplies by an integer.
    pub fn scale(&self, a: FieldElem, n: i64) -> FieldElem {
        let k = n.rem_euclid(self.p as i64) as u32;
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..self.degree {
            c[i] = (a.0[i] as u32 * k % self.p) as u16;
        }
        FieldElem(c)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p as u64;
        let n = self.degree;
        if n == 1 {
            let mut c = [0u16; MAX_DEGREE];
            c[0] = (a.0[0] as u64 * b.0[0] as u64 % p) as u16;
            return FieldElem(c);
        }
        let mut acc = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                acc[i + j] += ai * b.0[j] as u64;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let top = acc[k] % p;
            if top != 0 {
                for i in 0..n {
                    acc[k - n + i] += top * self.fold[i];
                }
            }
        }
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..n {
            c[i] = (acc[i] % p) as u16;
        }
        FieldElem(c)
    }

    pub fn pow(&self, a: FieldElem, mut exp: u128) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `a -> a^p`.
    pub fn frob(&self, a: FieldElem) -> FieldElem {
        if self.degree == 1 {
            return a;
        }
        let p = self.p as u64;
        let mut acc = [0u64; MAX_DEGREE];
        for i in 0..self.degree {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            let img = &self.frob_images[i];
            for (slot, &c) in acc.iter_mut().zip(img.0[..self.degree].iter()) {
                *slot += ai * c as u64;
            }
        }
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..self.degree {
            c[i] = (acc[i] % p) as u16;
        }
        FieldElem(c)
    }

    /// `a -> a^{p^t}`.
    pub fn frob_pow(&self, a: FieldElem, t: usize) -> FieldElem {
        let mut x = a;
        for _ in 0..t % self.degree {
            x = self.frob(x);
        }
        x
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree == 1 {
            return Ok(self.from_int(inv_mod(a.0[0] as u64, self.p as u64) as i64));
        }
        let p = self.p;
        let mut m: Vec<u32> = self.modulus.clone();
        m.push(1);
        let a_poly: Vec<u32> = self.coeffs(a);
        // extended Euclid: track s with s*a = r (mod m)
        let (mut r0, mut r1) = (m, trim(a_poly));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (vec![], vec![1]);
        while r1.len() > 1 {
            let (q, rem) = poly_divrem(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant
        let c = inv_mod(r1[0] as u64, p as u64) as u32;
        let mut out = [0u16; MAX_DEGREE];
        for (i, &v) in s1.iter().enumerate() {
            out[i] = ((v as u64 * c as u64) % p as u64) as u16;
        }
        Ok(FieldElem(out))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Element with coefficients given by the base-p digits of `index`.
    pub fn from_index(&self, mut index: u128) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        for slot in c.iter_mut().take(self.degree) {
            *slot = (index % self.p as u128) as u16;
            index /= self.p as u128;
        }
        FieldElem(c)
    }

    pub fn to_index(&self, a: FieldElem) -> u128 {
        a.0[..self.degree]
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    /// All elements in index order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let q = self.order().expect("field too large to enumerate");
        (0..q as u128).map(move |i| self.from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let mut c = [0u16; MAX_DEGREE];
        for slot in c.iter_mut().take(self.degree) {
            *slot = rng.gen_range(0..self.p) as u16;
        }
        FieldElem(c)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.order().ok_or(Error::DegreeTooLarge(self.degree))?;
        let mut ord = q - 1;
        for (prime, _) in factorize(q - 1) {
            while ord % prime == 0 && self.pow(a, (ord / prime) as u128) == self.one() {
                ord /= prime;
            }
        }
        Ok(ord)
    }

    /// Smallest element (in index order) generating the multiplicative group.
    pub fn generator(&self) -> Result<FieldElem> {
        let q = self.order().ok_or(Error::DegreeTooLarge(self.degree))?;
        let factors = factorize(q - 1);
        'search: for i in 1..q as u128 {
            let g = self.from_index(i);
            for &(prime, _) in &factors {
                if self.pow(g, ((q - 1) / prime) as u128) == self.one() {
                    continue 'search;
                }
            }
            return Ok(g);
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    /// Embedding of `self` into a field of degree divisible by `self.degree`.
    pub fn embedding_into(self: &Arc<Self>, target: &Arc<Field>) -> Result<Embedding> {
        if target.p != self.p || target.degree % self.degree != 0 {
            return Err(Error::InvalidParams(format!(
                "no embedding of F_{}^{} into F_{}^{}",
                self.p, self.degree, target.p, target.degree
            )));
        }
        let root = if self.degree == 1 {
            target.zero()
        } else {
            let mut g: Vec<FieldElem> = self.modulus.iter().map(|&c| target.from_int(c as i64)).collect();
            g.push(target.one());
            let mut roots = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            split_roots(target, g, &mut rng, &mut roots);
            roots.into_iter().min_by_key(|r| target.to_index(*r)).unwrap()
        };
        let mut powers = vec![target.one()];
        for i in 1..self.degree {
            let prev = powers[i - 1];
            powers.push(target.mul(prev, root));
        }
        Ok(Embedding {
            source: self.clone(),
            target: target.clone(),
            powers,
        })
    }
}

/// A field homomorphism `F_{p^a} -> F_{p^b}` with `a | b`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Arc<Field>,
    pub target: Arc<Field>,
    powers: Vec<FieldElem>,
}

impl Embedding {
    pub fn apply(&self, a: FieldElem) -> FieldElem {
        let t = &self.target;
        let mut acc = t.zero();
        for (i, pw) in self.powers.iter().enumerate() {
            let c = a.coeff(i);
            if c != 0 {
                acc = t.add(acc, t.scale(*pw, c as i64));
            }
        }
        acc
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ---- dense polynomials over F_p, lowest coefficient first ----

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap() as u64, p as u64);
    let mut q = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let v = (r[shift + i] as u64 + (p - c) as u64 * bi as u64) % p as u64;
            r[shift + i] = v as u32;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    poly_divrem(&poly_mul(a, b, p), m, p).1
}

fn poly_powmod(a: &[u32], mut exp: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_divrem(a, m, p).1;
    let mut acc = vec![1u32];
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_divrem(&x, &y, p).1;
        x = std::mem::replace(&mut y, r);
    }
    x
}

/// Rabin's test for a monic polynomial given with its leading coefficient.
fn is_irreducible(g: &[u32], p: u32) -> bool {
    let n = g.len() - 1;
    let x = vec![0, 1];
    // x^{p^k} mod g for k = 0..n
    let mut frob_powers = vec![poly_divrem(&x, g, p).1];
    for k in 1..=n {
        let prev = frob_powers[k - 1].clone();
        frob_powers.push(poly_powmod(&prev, p as u64, g, p));
    }
    if poly_sub(&frob_powers[n], &x, p) != Vec::<u32>::new() {
        return false;
    }
    for (q, _) in factorize(n as u64) {
        let k = n / q as usize;
        let diff = poly_sub(&frob_powers[k], &x, p);
        if poly_gcd(g, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, degree: usize) -> Vec<u32> {
    let mut index: u128 = 0;
    loop {
        let mut g = Vec::with_capacity(degree + 1);
        let mut rest = index;
        for _ in 0..degree {
            g.push((rest % p as u128) as u32);
            rest /= p as u128;
        }
        g.push(1);
        if g[0] != 0 && is_irreducible(&g, p) {
            g.pop();
            return g;
        }
        index += 1;
    }
}

// ---- polynomials over a Field, used only for root finding ----

fn fpoly_trim(f: &Field, mut a: Vec<FieldElem>) -> Vec<FieldElem> {
    let _ = f;
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn fpoly_rem(f: &Field, a: &[FieldElem], m: &[FieldElem]) -> Vec<FieldElem> {
    let mut r = fpoly_trim(f, a.to_vec());
    let lead_inv = f.inv(*m.last().unwrap()).unwrap();
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = f.mul(*r.last().unwrap(), lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        r = fpoly_trim(f, r);
    }
    r
}

fn fpoly_mulmod(f: &Field, a: &[FieldElem], b: &[FieldElem], m: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    fpoly_rem(f, &out, m)
}

fn fpoly_gcd(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let (mut x, mut y) = (fpoly_trim(f, a.to_vec()), fpoly_trim(f, b.to_vec()));
    while !y.is_empty() {
        let r = fpoly_rem(f, &x, &y);
        x = std::mem::replace(&mut y, r);
    }
    let lead_inv = f.inv(*x.last().unwrap()).unwrap();
    x.iter().map(|&c| f.mul(c, lead_inv)).collect()
}

fn fpoly_divexact(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut r = a.to_vec();
    let lead_inv = f.inv(*b.last().unwrap()).unwrap();
    let mut q = vec![f.zero(); a.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = f.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        r.pop();
    }
    q
}

/// Collects the roots of a squarefree polynomial splitting into linear factors.
fn split_roots(f: &Field, g: Vec<FieldElem>, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElem>) {
    let deg = g.len() - 1;
    if deg == 0 {
        return;
    }
    if deg == 1 {
        let root = f.neg(f.div(g[0], g[1]).unwrap());
        out.push(root);
        return;
    }
    loop {
        // trace of a*X splits the roots by the F_p-value of Tr(a*root)
        let a = f.random(rng);
        if a.is_zero() {
            continue;
        }
        let mut term = fpoly_rem(f, &[f.zero(), a], &g);
        let mut trace = term.clone();
        for _ in 1..f.degree() {
            let mut pw = vec![f.one()];
            let mut base = term.clone();
            let mut exp = f.p();
            while exp > 0 {
                if exp & 1 == 1 {
                    pw = fpoly_mulmod(f, &pw, &base, &g);
                }
                base = fpoly_mulmod(f, &base, &base, &g);
                exp >>= 1;
            }
            term = pw;
            let n = trace.len().max(term.len());
            trace = fpoly_trim(
                f,
                (0..n)
                    .map(|i| {
                        f.add(
                            trace.get(i).copied().unwrap_or(f.zero()),
                            term.get(i).copied().unwrap_or(f.zero()),
                        )
                    })
                    .collect(),
            );
        }
        for c in 0..f.p() {
            let mut shifted = trace.clone();
            if shifted.is_empty() {
                shifted.push(f.zero());
            }
            shifted[0] = f.sub(shifted[0], f.from_int(c as i64));
            let shifted = fpoly_trim(f, shifted);
            let d = fpoly_gcd(f, &g, &shifted);
            let dd = d.len() - 1;
            if dd > 0 && dd < deg {
                let rest = fpoly_divexact(f, &g, &d);
                split_roots(f, d, rng, out);
                split_roots(f, rest, rng, out);
                return;
            }
        }
    }
}
