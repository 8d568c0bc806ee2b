//! Morphisms and Hom-spaces.
//!
//! A matrix `F` compatible with the filtrations and with `phi_r` is a fixed
//! point of `T(F) = G_Y phi(C(F)) G_X^{-1}`, where `C(F)` divides entry
//! `(i, j)` by `u^{n_i - n_j}`. `T` raises valuations past `er + 1`, so a
//! fixed point is determined by its coefficients at `u^{n_i - n_j}`, and those
//! satisfy a small Frobenius-semilinear system over `F_p`. Monodromy
//! compatibility is then imposed on the resulting basis.

use std::fmt;

use rand::Rng;

use crate::error::{invariant, Error, Result};
use crate::linalg::{self, PrimeField, Scalars};
use crate::matrix::{AMatrix, AVec};
use crate::module::BreuilModule;
use crate::ring::{APoly, CoeffRing};

#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: BreuilModule,
    target: BreuilModule,
    matrix: AMatrix,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({} -> {}, {:?})", self.source.rank(), self.target.rank(), self.matrix)
    }
}

impl Morphism {
    /// Checks compatibility with filtration, Frobenius and monodromy exactly.
    pub fn new(source: BreuilModule, target: BreuilModule, matrix: AMatrix) -> Result<Morphism> {
        check_morphism(&source, &target, &matrix).map_err(Error::NotAMorphism)?;
        Ok(Morphism { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: BreuilModule, target: BreuilModule, matrix: AMatrix) -> Morphism {
        debug_assert!(check_morphism(&source, &target, &matrix).is_ok());
        Morphism { source, target, matrix }
    }

    pub fn identity(m: &BreuilModule) -> Morphism {
        Morphism {
            source: m.clone(),
            target: m.clone(),
            matrix: m.ring().mat_identity(m.rank()),
        }
    }

    pub fn zero(source: &BreuilModule, target: &BreuilModule) -> Morphism {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            matrix: source.ring().mat_zero(target.rank(), source.rank()),
        }
    }

    pub fn source(&self) -> &BreuilModule {
        &self.source
    }

    pub fn target(&self) -> &BreuilModule {
        &self.target
    }

    pub fn matrix(&self) -> &AMatrix {
        &self.matrix
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if self.target != other.source {
            return Err(Error::NotAMorphism("composition of non-matching morphisms".into()));
        }
        let ring = self.source.ring();
        Ok(Morphism {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: ring.mat_mul(&other.matrix, &self.matrix),
        })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::NotAMorphism("sum of morphisms with different ends".into()));
        }
        let ring = self.source.ring();
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: ring.mat_add(&self.matrix, &other.matrix),
        })
    }

    pub fn scale(&self, c: u32) -> Morphism {
        let ring = self.source.ring();
        let k = ring.field().from_int(c as i64);
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: ring.mat_scale(k, &self.matrix),
        }
    }

    pub fn apply(&self, x: &[APoly]) -> AVec {
        self.source.ring().mat_vec(&self.matrix, x)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.rank() == self.target.rank() && self.source.ring().mat_is_invertible(&self.matrix)
    }
}

/// Reason for the first failed compatibility condition, if any.
pub fn check_morphism(x: &BreuilModule, y: &BreuilModule, f: &AMatrix) -> std::result::Result<(), String> {
    if x.ring() != y.ring() {
        return Err("source and target have different parameters".into());
    }
    if (f.rows(), f.cols()) != (y.rank(), x.rank()) {
        return Err(format!("matrix is {}x{}, expected {}x{}", f.rows(), f.cols(), y.rank(), x.rank()));
    }
    let ring = x.ring();
    for j in 0..x.rank() {
        let gen = ring.vec_shift_up(&f.column(j), x.fil_exponents()[j]);
        if !y.in_fil(&gen) {
            return Err(format!("column {j} does not respect the filtration"));
        }
        let lhs = ring.mat_vec(f, &x.frobenius_matrix().column(j));
        let rhs = y.eval_phi(&gen).expect("filtration checked");
        if lhs != rhs {
            return Err(format!("column {j} does not commute with Frobenius"));
        }
    }
    let lhs = ring.mat_mul(f, x.monodromy_matrix());
    let rhs = ring.mat_add(&ring.mat_mul(y.monodromy_matrix(), f), &ring.mat_derivation(f));
    if lhs != rhs {
        return Err("matrix does not commute with monodromy".into());
    }
    Ok(())
}

/// Entry `(i, j)` multiplied by `u^{n^X_j - n^Y_i}`.
fn rescale(ring: &CoeffRing, x: &BreuilModule, y: &BreuilModule, f: &AMatrix) -> Result<AMatrix> {
    let mut c = f.clone();
    for i in 0..y.rank() {
        for j in 0..x.rank() {
            let (ni, nj) = (y.fil_exponents()[i], x.fil_exponents()[j]);
            let a = f.get(i, j);
            let b = if nj >= ni {
                ring.shift_up(a, nj - ni)
            } else {
                ring.try_divide_by_u_power(a, ni - nj)?
            };
            c.set(i, j, b);
        }
    }
    Ok(c)
}

fn contraction(ring: &CoeffRing, x: &BreuilModule, y: &BreuilModule, f: &AMatrix) -> Result<AMatrix> {
    let c = ring.mat_frobenius(&rescale(ring, x, y, f)?);
    Ok(ring.mat_mul(&ring.mat_mul(y.frobenius_matrix(), &c), x.frobenius_inverse()?))
}

/// Flattens a matrix into `F_p` coordinates, entry by entry.
pub(crate) fn flatten(ring: &CoeffRing, f: &AMatrix) -> Vec<u32> {
    let mut out = Vec::new();
    for a in f.entries() {
        out.extend(ring.to_fp(a));
    }
    out
}

/// `F_p`-basis of `Hom(X, Y)`.
pub fn hom(x: &BreuilModule, y: &BreuilModule) -> Result<Vec<AMatrix>> {
    if x.ring() != y.ring() {
        return Err(Error::ParamsMismatch);
    }
    let ring = x.ring();
    let field = ring.field().clone();
    let deg = field.degree();
    let pf = PrimeField(field.p());
    let (dx, dy) = (x.rank(), y.rank());
    let (nx, ny) = (x.fil_exponents(), y.fil_exponents());
    if dx == 0 || dy == 0 {
        return Ok(Vec::new());
    }
    let gx_inv = x.frobenius_inverse()?;
    let gy = y.frobenius_matrix();

    // positions contributing to T modulo u^{k0}
    let pairs: Vec<(usize, usize)> = (0..dy)
        .flat_map(|i| (0..dx).map(move |j| (i, j)))
        .filter(|&(i, j)| ny[i] >= nx[j])
        .collect();
    let index_of = |i: usize, j: usize| pairs.iter().position(|&q| q == (i, j));
    let nunk = pairs.len() * deg;
    // equation rows: the coefficient at u^{n_i - n_j} reproduces the unknown,
    // and coefficients below it vanish
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut row_keys: Vec<(usize, usize, usize)> = Vec::new();
    for &(i, j) in &pairs {
        for m in 0..=ny[i] - nx[j] {
            row_keys.push((i, j, m));
        }
    }
    for _ in 0..row_keys.len() * deg {
        rows.push(vec![0; nunk]);
    }
    for (col_pair, &(i, j)) in pairs.iter().enumerate() {
        for l in 0..deg {
            let col = col_pair * deg + l;
            let scalar = field.frob(field.basis(l));
            for (rk, &(ri, rj, m)) in row_keys.iter().enumerate() {
                // coefficient of u^m in (G_Y)_{ri,i} (G_X^{-1})_{j,rj}, times scalar
                let a = gy.get(ri, i);
                let b = gx_inv.get(j, rj);
                let mut c = field.zero();
                for t in 0..=m {
                    c = field.add(c, field.mul(a.coeff(t), b.coeff(m - t)));
                }
                c = field.mul(c, scalar);
                for lc in 0..deg {
                    rows[rk * deg + lc][col] = c.coeff(lc);
                }
            }
        }
    }
    for (rk, &(ri, rj, m)) in row_keys.iter().enumerate() {
        if m == ny[ri] - nx[rj] {
            let q = index_of(ri, rj).expect("diagonal position is a pair");
            for lc in 0..deg {
                let r = &mut rows[rk * deg + lc][q * deg + lc];
                *r = pf.sub(*r, 1);
            }
        }
    }
    let solutions = linalg::nullspace(&pf, &rows, nunk);

    // lift residues to exact fixed points of T
    let mut lifted = Vec::with_capacity(solutions.len());
    for sol in &solutions {
        let mut f = ring.mat_zero(dy, dx);
        for (q, &(i, j)) in pairs.iter().enumerate() {
            let coeffs: Vec<i64> = sol[q * deg..(q + 1) * deg].iter().map(|&c| c as i64).collect();
            let c = field.from_coeffs(&coeffs)?;
            if c.is_zero() {
                continue;
            }
            f.set(i, j, ring.monomial(c, ny[i] - nx[j]));
        }
        let mut iterations = 0;
        loop {
            let next = contraction(ring, x, y, &f)?;
            if next == f {
                break;
            }
            f = next;
            iterations += 1;
            if iterations > ring.ep() + 2 {
                return Err(invariant("fixed-point iteration did not stabilise"));
            }
        }
        lifted.push(f);
    }

    // monodromy compatibility on the span of the lifts
    let residues: Vec<Vec<u32>> = lifted
        .iter()
        .map(|f| {
            let lhs = ring.mat_mul(f, x.monodromy_matrix());
            let rhs = ring.mat_add(&ring.mat_mul(y.monodromy_matrix(), f), &ring.mat_derivation(f));
            flatten(ring, &ring.mat_sub(&lhs, &rhs))
        })
        .collect();
    let len = dx * dy * ring.ep() * deg;
    let rows: Vec<Vec<u32>> = (0..len).map(|k| residues.iter().map(|r| r[k]).collect()).collect();
    let combos = linalg::nullspace(&pf, &rows, lifted.len());
    let basis: Vec<AMatrix> = combos
        .iter()
        .map(|coef| combine(ring, &lifted, coef, dy, dx))
        .collect();
    debug_assert!(basis.iter().all(|f| check_morphism(x, y, f).is_ok()));
    Ok(basis)
}

/// `sum c_i F_i` with integer coefficients.
pub fn combine(ring: &CoeffRing, mats: &[AMatrix], coef: &[u32], rows: usize, cols: usize) -> AMatrix {
    let mut acc = ring.mat_zero(rows, cols);
    for (m, &c) in mats.iter().zip(coef) {
        if c != 0 {
            acc = ring.mat_add(&acc, &ring.mat_scale(ring.field().from_int(c as i64), m));
        }
    }
    acc
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoResult {
    Isomorphic(Morphism),
    NotIsomorphic,
    Inconclusive,
}

/// Searches `Hom(X, Y)` for an invertible element.
pub fn find_isomorphism<R: Rng + ?Sized>(x: &BreuilModule, y: &BreuilModule, rng: &mut R) -> Result<IsoResult> {
    if x.ring() != y.ring() {
        return Err(Error::ParamsMismatch);
    }
    if x.rank() != y.rank() {
        return Ok(IsoResult::NotIsomorphic);
    }
    if x.rank() == 0 {
        return Ok(IsoResult::Isomorphic(Morphism::identity(x)));
    }
    let mut sorted_x = x.fil_exponents().to_vec();
    let mut sorted_y = y.fil_exponents().to_vec();
    sorted_x.sort_unstable();
    sorted_y.sort_unstable();
    if sorted_x != sorted_y {
        return Ok(IsoResult::NotIsomorphic);
    }
    let forward = hom(x, y)?;
    let backward = hom(y, x)?;
    if forward.len() != backward.len() || forward.is_empty() {
        return Ok(IsoResult::NotIsomorphic);
    }
    let ring = x.ring();
    let p = ring.p() as u64;
    let m = forward.len();
    let d = x.rank();
    let make = |coef: &[u32]| combine(ring, &forward, coef, d, d);
    let total = p.checked_pow(m as u32).filter(|&t| t <= ENUMERATION_LIMIT);
    if let Some(total) = total {
        let mut coef = vec![0u32; m];
        for mut idx in 1..total {
            for c in coef.iter_mut() {
                *c = (idx % p) as u32;
                idx /= p;
            }
            let f = make(&coef);
            if ring.mat_is_invertible(&f) {
                return Ok(IsoResult::Isomorphic(Morphism::new_unchecked(x.clone(), y.clone(), f)));
            }
        }
        return Ok(IsoResult::NotIsomorphic);
    }
    for _ in 0..RANDOM_TRIALS {
        let coef: Vec<u32> = (0..m).map(|_| rng.gen_range(0..p as u32)).collect();
        let f = make(&coef);
        if ring.mat_is_invertible(&f) {
            return Ok(IsoResult::Isomorphic(Morphism::new_unchecked(x.clone(), y.clone(), f)));
        }
    }
    Ok(IsoResult::Inconclusive)
}

/// Largest number of combinations searched exhaustively.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;
pub const RANDOM_TRIALS: usize = 64;
