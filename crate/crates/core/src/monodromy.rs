//! All monodromy operators compatible with a given filtration and Frobenius.

use crate::error::{Error, Result};
use crate::hom::{combine, flatten};
use crate::linalg::{self, PrimeField};
use crate::matrix::AMatrix;
use crate::module::BreuilModule;
use crate::ring::CoeffRing;

/// Affine space of valid monodromy matrices: `particular + span(directions)`
/// over `F_p`, or empty.
#[derive(Clone, Debug)]
pub struct MonodromySolutions {
    pub particular: Option<AMatrix>,
    pub directions: Vec<AMatrix>,
}

impl MonodromySolutions {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// `F_p`-dimension of the solution space, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.directions.len())
    }

    /// Every solution, provided there are at most `limit` of them.
    pub fn enumerate(&self, ring: &CoeffRing, limit: u64) -> Option<Vec<AMatrix>> {
        let Some(base) = &self.particular else {
            return Some(Vec::new());
        };
        let p = ring.p() as u64;
        let count = p.checked_pow(self.directions.len() as u32).filter(|&c| c <= limit)?;
        let (rows, cols) = (base.rows(), base.cols());
        let mut out = Vec::with_capacity(count as usize);
        let mut coef = vec![0u32; self.directions.len()];
        for mut idx in 0..count {
            for c in coef.iter_mut() {
                *c = (idx % p) as u32;
                idx /= p;
            }
            out.push(ring.mat_add(base, &combine(ring, &self.directions, &coef, rows, cols)));
        }
        Some(out)
    }

    /// Solution with the given coordinates along `directions`.
    pub fn pick(&self, ring: &CoeffRing, coef: &[u32]) -> Option<AMatrix> {
        let base = self.particular.as_ref()?;
        Some(ring.mat_add(base, &combine(ring, &self.directions, coef, base.rows(), base.cols())))
    }
}

/// Residue of the commutation identity, one column per generator.
fn commutation_residue(m: &BreuilModule) -> Result<AMatrix> {
    let ring = m.ring();
    let d = m.rank();
    let e = m.params().e as usize;
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        let nj = m.fil_exponents()[j];
        let mut v = ring.vec_scale(ring.field().from_int(-(nj as i64)), &ring.vec_unit(d, j));
        v = ring.vec_add(&v, &m.monodromy_matrix().column(j));
        let lhs = m.eval_phi(&ring.vec_shift_up(&v, e + nj))?;
        cols.push(ring.vec_add(&lhs, &m.monodromy_apply(&m.frobenius_matrix().column(j))));
    }
    Ok(AMatrix::from_columns(&cols, d))
}

/// Solves for every `Nmat` making `(fil, frob, Nmat)` a valid object.
pub fn solve_monodromy(ring: &CoeffRing, fil: &[usize], frob: &AMatrix) -> Result<MonodromySolutions> {
    let d = fil.len();
    let er = ring.params().er();
    let e = ring.params().e as usize;
    let ep = ring.ep();
    if let Some(&n) = fil.iter().find(|&&n| n > er) {
        return Err(Error::Invalid(format!("filtration exponent {n} exceeds er = {er}")));
    }
    if !ring.mat_is_invertible(frob) {
        return Err(Error::NotInvertible);
    }
    let field = ring.field();
    let deg = field.degree();
    let pf = PrimeField(field.p());
    let base = BreuilModule::new(ring.clone(), fil.to_vec(), frob.clone(), ring.mat_zero(d, d))?;
    let r0 = flatten(ring, &commutation_residue(&base)?);

    // unknown coefficients not forced to vanish by u^e N(Fil) in Fil
    let mut unknowns = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let low = (fil[i]).saturating_sub(e + fil[j]);
            for m in low..ep {
                for l in 0..deg {
                    let mut x = ring.mat_zero(d, d);
                    x.set(i, j, ring.monomial(field.basis(l), m));
                    unknowns.push(x);
                }
            }
        }
    }
    let mut columns = Vec::with_capacity(unknowns.len());
    for x in &unknowns {
        let r = flatten(ring, &commutation_residue(&base.with_monodromy(x.clone())?)?);
        columns.push(r.iter().zip(&r0).map(|(&a, &b)| linalg::Scalars::sub(&pf, a, b)).collect::<Vec<u32>>());
    }
    let len = r0.len();
    let rows: Vec<Vec<u32>> = (0..len).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
    let rhs: Vec<u32> = r0.iter().map(|&b| linalg::Scalars::neg(&pf, b)).collect();
    let Some((particular, homogeneous)) = linalg::solve_affine(&pf, &rows, &rhs, unknowns.len()) else {
        return Ok(MonodromySolutions {
            particular: None,
            directions: Vec::new(),
        });
    };
    let particular = combine(ring, &unknowns, &particular, d, d);
    let directions = homogeneous.iter().map(|h| combine(ring, &unknowns, h, d, d)).collect();
    Ok(MonodromySolutions {
        particular: Some(particular),
        directions,
    })
}
