//! Breuil modules in adapted form.
//!
//! A module of rank `d` is stored through an adapted basis `e_1..e_d` with
//! `Fil = sum u^{n_j} A e_j`. Column `j` of the Frobenius matrix holds the
//! coordinates of `phi_r(u^{n_j} e_j)` and column `j` of the monodromy
//! matrix holds the coordinates of `N(e_j)`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::{AMatrix, AVec};
use crate::params::GlobalParams;
use crate::ring::{APoly, CoeffRing};

#[derive(Clone)]
pub struct BreuilModule {
    ring: CoeffRing,
    fil: Vec<usize>,
    frob: AMatrix,
    monodromy: AMatrix,
    frob_inv: Option<AMatrix>,
}

impl PartialEq for BreuilModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.fil == other.fil && self.frob == other.frob && self.monodromy == other.monodromy
    }
}

impl Eq for BreuilModule {}

impl fmt::Debug for BreuilModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BreuilModule")
            .field("params", &self.ring.params())
            .field("fil", &self.fil)
            .field("frob", &self.frob)
            .field("monodromy", &self.monodromy)
            .finish()
    }
}

/// A failed axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ExponentRange { index: usize, exponent: usize },
    FrobeniusNotInvertible,
    FilStability { row: usize, col: usize },
    Commutation { col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ExponentRange { index, exponent } => {
                write!(f, "filtration exponent {exponent} at index {index} is out of range")
            }
            Violation::FrobeniusNotInvertible => write!(f, "Frobenius matrix is not invertible"),
            Violation::FilStability { row, col } => {
                write!(f, "u^e N does not preserve the filtration at entry ({row}, {col})")
            }
            Violation::Commutation { col } => {
                write!(f, "monodromy does not commute with Frobenius on generator {col}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl BreuilModule {
    /// Assembles a module from adapted data; only shapes are checked here.
    pub fn new(ring: CoeffRing, fil: Vec<usize>, frob: AMatrix, monodromy: AMatrix) -> Result<Self> {
        let d = fil.len();
        if (frob.rows(), frob.cols()) != (d, d) || (monodromy.rows(), monodromy.cols()) != (d, d) {
            return Err(Error::Shape(format!(
                "rank {d} with Frobenius {}x{} and monodromy {}x{}",
                frob.rows(),
                frob.cols(),
                monodromy.rows(),
                monodromy.cols()
            )));
        }
        let frob_inv = ring.mat_inverse(&frob).ok();
        Ok(BreuilModule {
            ring,
            fil,
            frob,
            monodromy,
            frob_inv,
        })
    }

    /// Like `new`, but fails unless every axiom holds.
    pub fn validated(ring: CoeffRing, fil: Vec<usize>, frob: AMatrix, monodromy: AMatrix) -> Result<Self> {
        let m = BreuilModule::new(ring, fil, frob, monodromy)?;
        let report = m.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(v.to_string()));
        }
        Ok(m)
    }

    pub fn zero(ring: CoeffRing) -> Self {
        BreuilModule::new(ring.clone(), Vec::new(), ring.mat_zero(0, 0), ring.mat_zero(0, 0)).expect("empty shapes agree")
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn params(&self) -> GlobalParams {
        self.ring.params()
    }

    pub fn rank(&self) -> usize {
        self.fil.len()
    }

    pub fn fil_exponents(&self) -> &[usize] {
        &self.fil
    }

    pub fn frobenius_matrix(&self) -> &AMatrix {
        &self.frob
    }

    pub fn monodromy_matrix(&self) -> &AMatrix {
        &self.monodromy
    }

    pub(crate) fn frobenius_inverse(&self) -> Result<&AMatrix> {
        self.frob_inv.as_ref().ok_or(Error::NotInvertible)
    }

    /// Same underlying module with another monodromy matrix.
    pub fn with_monodromy(&self, monodromy: AMatrix) -> Result<Self> {
        BreuilModule::new(self.ring.clone(), self.fil.clone(), self.frob.clone(), monodromy)
    }

    pub fn validate(&self) -> ValidationReport {
        let ring = &self.ring;
        let d = self.rank();
        let er = self.params().er();
        let e = self.params().e as usize;
        let ep = ring.ep();
        let mut violations = Vec::new();
        for (index, &n) in self.fil.iter().enumerate() {
            if n > er {
                violations.push(Violation::ExponentRange { index, exponent: n });
            }
        }
        if self.frob_inv.is_none() {
            violations.push(Violation::FrobeniusNotInvertible);
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        debug_assert!(self.fil.iter().all(|&n| ring.p() * (ep - n) >= ep));
        let mut stable_cols = vec![true; d];
        for i in 0..d {
            for j in 0..d {
                let x = self.monodromy.get(i, j);
                let o = x.ord();
                if o + e + self.fil[j] < self.fil[i] && o + e + self.fil[j] < ep {
                    violations.push(Violation::FilStability { row: i, col: j });
                    stable_cols[j] = false;
                }
            }
        }
        for j in 0..d {
            if !stable_cols[j] {
                continue;
            }
            let lhs = self.phi_of_ue_n_generator(j).expect("stability checked");
            let rhs = ring.vec_zero(d);
            let rhs = ring.vec_sub(&rhs, &self.monodromy_apply(&self.frob.column(j)));
            if lhs != rhs {
                violations.push(Violation::Commutation { col: j });
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `phi_r(u^e N(u^{n_j} e_j))`.
    fn phi_of_ue_n_generator(&self, j: usize) -> Result<AVec> {
        let ring = &self.ring;
        let e = self.params().e as usize;
        let d = self.rank();
        let nj = self.fil[j];
        let mut v = ring.vec_unit(d, j);
        v = ring.vec_scale(ring.field().from_int(-(nj as i64)), &v);
        v = ring.vec_add(&v, &self.monodromy.column(j));
        let y = ring.vec_shift_up(&v, e + nj);
        self.eval_phi(&y)
    }

    /// `N(x) = N_A(x) + Nmat x`, with `N_A` applied coordinatewise.
    pub fn monodromy_apply(&self, x: &[APoly]) -> AVec {
        let ring = &self.ring;
        let base: AVec = x.iter().map(|a| ring.derivation(a)).collect();
        ring.vec_add(&base, &ring.mat_vec(&self.monodromy, x))
    }

    pub fn in_fil(&self, y: &[APoly]) -> bool {
        let ep = self.ring.ep();
        y.iter().zip(&self.fil).all(|(a, &n)| {
            let o = a.ord();
            o >= n || o == ep
        })
    }

    /// `phi_r` on an element of the filtration.
    pub fn eval_phi(&self, y: &[APoly]) -> Result<AVec> {
        let ring = &self.ring;
        if y.len() != self.rank() {
            return Err(Error::Shape(format!("vector of length {} for rank {}", y.len(), self.rank())));
        }
        if !self.in_fil(y) {
            return Err(Error::NotInFiltration);
        }
        let c: AVec = y.iter().zip(&self.fil).map(|(a, &n)| ring.shift_down(a, n)).collect();
        let phi_c: AVec = c.iter().map(|a| ring.frobenius(a)).collect();
        Ok(ring.mat_vec(&self.frob, &phi_c))
    }

    /// Least `n` with `u^n x` in the filtration.
    pub fn min_exponent(&self, x: &[APoly]) -> usize {
        let er = self.params().er();
        (0..=er)
            .find(|&n| self.in_fil(&self.ring.vec_shift_up(x, n)))
            .expect("u^{er} M lies in the filtration")
    }

    /// `x -> phi_r(u^n x)` with `n` minimal.
    pub fn phi_tilde(&self, x: &[APoly]) -> Result<AVec> {
        if x.iter().all(|a| a.coeff(0).is_zero()) {
            return Err(Error::InUM);
        }
        let n = self.min_exponent(x);
        self.eval_phi(&self.ring.vec_shift_up(x, n))
    }

    pub fn direct_sum(&self, other: &BreuilModule) -> Result<BreuilModule> {
        if self.ring != other.ring {
            return Err(Error::ParamsMismatch);
        }
        let ring = &self.ring;
        let mut fil = self.fil.clone();
        fil.extend_from_slice(&other.fil);
        BreuilModule::new(
            ring.clone(),
            fil,
            ring.block_diag(&self.frob, &other.frob),
            ring.block_diag(&self.monodromy, &other.monodromy),
        )
    }

    /// Base change of the residue field from `F_{p^f}` to `F_{p^{fm}}`.
    pub fn scalar_extend(&self, m: u32) -> Result<BreuilModule> {
        if m == 0 {
            return Err(Error::InvalidParams("extension degree must be positive".into()));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let params = self.params();
        let big = CoeffRing::new(params.with_f(params.f * m))?;
        let emb = self.ring.field().embedding_into(big.field())?;
        let lift = |a: &AMatrix| {
            let rows: Vec<AVec> = (0..a.rows())
                .map(|i| a.row(i).iter().map(|x| big.map_coeffs(x, |c| emb.apply(c))).collect())
                .collect();
            AMatrix::from_rows(rows, a.cols()).expect("rectangular")
        };
        BreuilModule::new(big.clone(), self.fil.clone(), lift(&self.frob), lift(&self.monodromy))
    }

    /// True when `P` is invertible and maps the filtration onto itself,
    /// so that its columns form another adapted basis.
    pub fn preserves_fil(&self, p: &AMatrix) -> bool {
        let ep = self.ring.ep();
        let d = self.rank();
        if (p.rows(), p.cols()) != (d, d) || !self.ring.mat_is_invertible(p) {
            return false;
        }
        (0..d).all(|i| {
            (0..d).all(|j| {
                let o = p.get(i, j).ord();
                o == ep || o + self.fil[j] >= self.fil[i]
            })
        })
    }

    /// The same object written in the basis given by the columns of `P`.
    pub fn conjugate(&self, p: &AMatrix) -> Result<BreuilModule> {
        if !self.preserves_fil(p) {
            return Err(Error::Invalid("base change does not preserve the filtration".into()));
        }
        let ring = &self.ring;
        let d = self.rank();
        let p_inv = ring.mat_inverse(p)?;
        // Delta^{-1} P Delta with Delta = diag(u^{n_i})
        let mut scaled = p.clone();
        for i in 0..d {
            for j in 0..d {
                let x = p.get(i, j);
                let y = if self.fil[j] >= self.fil[i] {
                    ring.shift_up(x, self.fil[j] - self.fil[i])
                } else {
                    ring.shift_down(x, self.fil[i] - self.fil[j])
                };
                scaled.set(i, j, y);
            }
        }
        let frob = ring.mat_mul(&p_inv, &ring.mat_mul(&self.frob, &ring.mat_frobenius(&scaled)));
        let monodromy = ring.mat_mul(
            &p_inv,
            &ring.mat_add(&ring.mat_mul(&self.monodromy, p), &ring.mat_derivation(p)),
        );
        BreuilModule::new(ring.clone(), self.fil.clone(), frob, monodromy)
    }

    /// Random filtration-preserving automorphism of the underlying module.
    pub fn random_fil_automorphism<R: Rng + ?Sized>(&self, rng: &mut R) -> AMatrix {
        let ring = &self.ring;
        let d = self.rank();
        loop {
            let mut p = ring.mat_random(d, d, rng);
            for i in 0..d {
                for j in 0..d {
                    if self.fil[i] > self.fil[j] {
                        let low = self.fil[i] - self.fil[j];
                        let mut x = p.get(i, j).clone();
                        for k in 0..low {
                            x.set_coeff(k, FieldElem::ZERO);
                        }
                        p.set(i, j, x);
                    }
                }
            }
            if ring.mat_is_invertible(&p) {
                return p;
            }
        }
    }

    /// Reorders the basis so that filtration exponents increase.
    pub fn sorted(&self) -> (BreuilModule, AMatrix) {
        let ring = &self.ring;
        let d = self.rank();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&j| (self.fil[j], j));
        let mut p = ring.mat_zero(d, d);
        let mut frob = ring.mat_zero(d, d);
        let mut monodromy = ring.mat_zero(d, d);
        for (a, &i) in order.iter().enumerate() {
            p.set(i, a, ring.one());
            for (b, &j) in order.iter().enumerate() {
                frob.set(a, b, self.frob.get(i, j).clone());
                monodromy.set(a, b, self.monodromy.get(i, j).clone());
            }
        }
        let fil: Vec<usize> = order.iter().map(|&j| self.fil[j]).collect();
        let m = BreuilModule::new(ring.clone(), fil, frob, monodromy).expect("square permutation");
        (m, p)
    }

    /// Coordinates of `x` in the basis `phi_r(u^{n_j} e_j)`.
    pub fn frobenius_coordinates(&self, x: &[APoly]) -> Result<AVec> {
        Ok(self.ring.mat_vec(self.frobenius_inverse()?, x))
    }

    /// Flattens a vector of `M` into `k`-coordinates: index `i * ep + m`.
    pub fn to_k_vector(&self, x: &[APoly]) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(self.rank() * self.ring.ep());
        for a in x {
            out.extend_from_slice(a.coeffs());
        }
        out
    }

    pub fn from_k_vector(&self, v: &[FieldElem]) -> AVec {
        let ep = self.ring.ep();
        v.chunks(ep)
            .map(|c| self.ring.from_coeffs(c.to_vec()).expect("chunk of length ep"))
            .collect()
    }

    /// `k`-basis of the filtration: `u^m e_j` with `m >= n_j`.
    pub fn fil_k_basis(&self) -> Vec<Vec<FieldElem>> {
        let ring = &self.ring;
        let d = self.rank();
        let mut out = Vec::new();
        for j in 0..d {
            for m in self.fil[j]..ring.ep() {
                let mut v = ring.vec_zero(d);
                v[j] = ring.u_pow(m);
                out.push(self.to_k_vector(&v));
            }
        }
        out
    }
}
