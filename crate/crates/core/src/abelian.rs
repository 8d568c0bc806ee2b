//! Adapted bases, subobjects, kernels and cokernels.

use crate::error::{invariant, Error, Result};
use crate::field::FieldElem;
use crate::hom::Morphism;
use crate::linalg;
use crate::matrix::{AMatrix, AVec};
use crate::module::BreuilModule;
use crate::ring::CoeffRing;

/// A filtration of `A^d` given by generators; it always contains `u^{er} A^d`.
#[derive(Clone, Debug)]
pub struct FilPresentation {
    pub ring: CoeffRing,
    pub rank: usize,
    pub generators: Vec<AVec>,
}

/// Result of adapting a presentation: `Fil = sum u^{exponents[i]} A b_i`
/// where `b_i` is column `i` of `basis`.
#[derive(Clone, Debug)]
pub struct Adapted {
    pub exponents: Vec<usize>,
    pub basis: AMatrix,
}

/// Adapted basis of a filtration, exponents sorted ascending.
pub fn adapt(pres: &FilPresentation) -> Result<Adapted> {
    let ring = &pres.ring;
    let d = pres.rank;
    if let Some(g) = pres.generators.iter().find(|g| g.len() != d) {
        return Err(Error::Shape(format!("generator of length {} in rank {d}", g.len())));
    }
    let er = ring.params().er();
    let mut cols = pres.generators.clone();
    for i in 0..d {
        let mut v = ring.vec_zero(d);
        v[i] = ring.u_pow(er);
        cols.push(v);
    }
    let m = AMatrix::from_columns(&cols, d);
    let snf = ring.smith_normal_form(&m);
    Ok(Adapted {
        exponents: snf.exponents,
        basis: snf.u_inv,
    })
}

/// `k`-linear coordinates of the vectors `c` in `A^k` with `B c` in `Fil M`.
fn fil_preimage(m: &BreuilModule, basis: &AMatrix) -> Vec<AVec> {
    let ring = m.ring();
    let field = ring.field();
    let ep = ring.ep();
    let k = basis.cols();
    let d = m.rank();
    let nunk = k * ep;
    let mut rows = Vec::new();
    for i in 0..d {
        for deg in 0..m.fil_exponents()[i] {
            let mut row = vec![FieldElem::ZERO; nunk];
            for j in 0..k {
                let b = basis.get(i, j);
                for shift in 0..=deg {
                    row[j * ep + shift] = b.coeff(deg - shift);
                }
            }
            rows.push(row);
        }
    }
    linalg::nullspace(field.as_ref(), &rows, nunk)
        .iter()
        .map(|v| {
            v.chunks(ep)
                .map(|c| ring.from_coeffs(c.to_vec()).expect("chunk of length ep"))
                .collect()
        })
        .collect()
}

/// Subobject spanned by the columns of `basis`, which must form a basis of a
/// direct summand stable under `phi_r` and `N`. The filtration is the one
/// induced from `M`.
pub fn subobject(m: &BreuilModule, basis: &AMatrix) -> Result<(BreuilModule, Morphism)> {
    let ring = m.ring();
    let k = basis.cols();
    if basis.rows() != m.rank() {
        return Err(Error::Shape("basis rows do not match the rank".into()));
    }
    if k == 0 {
        let z = BreuilModule::zero(ring.clone());
        return Ok((z.clone(), Morphism::zero(&z, m)));
    }
    let snf = ring.smith_normal_form(basis);
    if snf.exponents.iter().any(|&a| a != 0) {
        return Err(invariant("subobject basis does not span a direct summand"));
    }
    let adapted = adapt(&FilPresentation {
        ring: ring.clone(),
        rank: k,
        generators: fil_preimage(m, basis),
    })?;
    let new_basis = ring.mat_mul(basis, &adapted.basis);
    let coords = |v: &[crate::ring::APoly]| -> Result<AVec> {
        ring.solve(&new_basis, v).ok_or_else(|| invariant("vector leaves the candidate subobject"))
    };
    let mut frob_cols = Vec::with_capacity(k);
    let mut mono_cols = Vec::with_capacity(k);
    for j in 0..k {
        let b = new_basis.column(j);
        let gen = ring.vec_shift_up(&b, adapted.exponents[j]);
        frob_cols.push(coords(&m.eval_phi(&gen)?)?);
        mono_cols.push(coords(&m.monodromy_apply(&b))?);
    }
    let sub = BreuilModule::new(
        ring.clone(),
        adapted.exponents,
        AMatrix::from_columns(&frob_cols, k),
        AMatrix::from_columns(&mono_cols, k),
    )?;
    let incl = Morphism::new(sub.clone(), m.clone(), new_basis)?;
    Ok((sub, incl))
}

/// Quotient of `Y` by the image of `F`, which must be a direct summand.
fn quotient(y: &BreuilModule, image: &AMatrix) -> Result<(BreuilModule, Morphism)> {
    let ring = y.ring();
    let dy = y.rank();
    let snf = ring.smith_normal_form(image);
    if snf.exponents.iter().any(|&a| a != 0 && a != ring.ep()) {
        return Err(Error::NotAMorphism("image is not a direct summand".into()));
    }
    let rho = snf.exponents.iter().filter(|&&a| a == 0).count();
    let dc = dy - rho;
    if dc == 0 {
        let z = BreuilModule::zero(ring.clone());
        return Ok((z.clone(), Morphism::zero(y, &z)));
    }
    let proj = snf.u.row_range(rho, dy);
    let lift = snf.u_inv.column_range(rho, dy);
    // Fil C is the image of Fil Y
    let mut delta = ring.mat_zero(dy, dy);
    for i in 0..dy {
        delta.set(i, i, ring.u_pow(y.fil_exponents()[i]));
    }
    let proj_fil = ring.mat_mul(&proj, &delta);
    let generators: Vec<AVec> = (0..dy).map(|j| proj_fil.column(j)).collect();
    let adapted = adapt(&FilPresentation {
        ring: ring.clone(),
        rank: dc,
        generators,
    })?;
    let basis_inv = ring.mat_inverse(&adapted.basis)?;
    let new_proj = ring.mat_mul(&basis_inv, &proj);
    let mut frob_cols = Vec::with_capacity(dc);
    let mut mono_cols = Vec::with_capacity(dc);
    for j in 0..dc {
        let c = adapted.basis.column(j);
        let target = ring.vec_shift_up(&c, adapted.exponents[j]);
        let z = ring
            .solve(&proj_fil, &target)
            .ok_or_else(|| invariant("filtration of the quotient is not the image filtration"))?;
        let phi_c: AVec = z.iter().map(|a| ring.frobenius(a)).collect();
        let image_y = ring.mat_vec(y.frobenius_matrix(), &phi_c);
        frob_cols.push(ring.mat_vec(&new_proj, &image_y));
        let lifted = ring.mat_vec(&lift, &c);
        mono_cols.push(ring.mat_vec(&new_proj, &y.monodromy_apply(&lifted)));
    }
    let c = BreuilModule::new(
        ring.clone(),
        adapted.exponents,
        AMatrix::from_columns(&frob_cols, dc),
        AMatrix::from_columns(&mono_cols, dc),
    )?;
    let projection = Morphism::new(y.clone(), c.clone(), new_proj)?;
    Ok((c, projection))
}

pub fn kernel(f: &Morphism) -> Result<(BreuilModule, Morphism)> {
    let ring = f.source().ring();
    let (dx, dy) = (f.source().rank(), f.target().rank());
    let snf = ring.smith_normal_form(f.matrix());
    if snf.exponents.iter().any(|&a| a != 0 && a != ring.ep()) {
        return Err(Error::NotAMorphism("Smith exponents outside {0, ep}".into()));
    }
    let ker_cols: Vec<AVec> = (0..dx)
        .filter(|&i| i >= dy || snf.exponents[i] == ring.ep())
        .map(|i| snf.v.column(i))
        .collect();
    let basis = AMatrix::from_columns(&ker_cols, dx);
    subobject(f.source(), &basis)
}

pub fn cokernel(f: &Morphism) -> Result<(BreuilModule, Morphism)> {
    quotient(f.target(), f.matrix())
}

/// Quotient by a subobject given through its inclusion.
pub fn quotient_by(incl: &Morphism) -> Result<(BreuilModule, Morphism)> {
    cokernel(incl)
}

/// Rank of the image of a morphism.
pub fn image_rank(f: &Morphism) -> Result<usize> {
    let ring = f.source().ring();
    let snf = ring.smith_normal_form(f.matrix());
    if snf.exponents.iter().any(|&a| a != 0 && a != ring.ep()) {
        return Err(Error::NotAMorphism("Smith exponents outside {0, ep}".into()));
    }
    Ok(snf.exponents.iter().filter(|&&a| a == 0).count())
}

/// `k`-basis of `F(S)` for the `A`-submodule `S` spanned by the given vectors.
pub fn image_k_span(f: &Morphism, spanning: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    let x = f.source();
    let y = f.target();
    let imgs: Vec<Vec<FieldElem>> = spanning
        .iter()
        .map(|v| y.to_k_vector(&f.apply(&x.from_k_vector(v))))
        .collect();
    linalg::span_basis(y.ring().field().as_ref(), &imgs, y.rank() * y.ring().ep())
}

/// `k`-basis of the `A`-span of the given vectors of `M`.
pub fn a_span_k_basis(m: &BreuilModule, gens: &[AVec]) -> Vec<Vec<FieldElem>> {
    let ring = m.ring();
    let mut vecs = Vec::new();
    for g in gens {
        for s in 0..ring.ep() {
            vecs.push(m.to_k_vector(&ring.vec_shift_up(g, s)));
        }
    }
    linalg::span_basis(ring.field().as_ref(), &vecs, m.rank() * ring.ep())
}

/// `A`-basis of the submodule generated by `gens`, which must be a free direct summand.
pub fn summand_basis(m: &BreuilModule, gens: &[AVec]) -> Result<AMatrix> {
    let ring = m.ring();
    let d = m.rank();
    if gens.is_empty() {
        return Ok(ring.mat_zero(d, 0));
    }
    let g = AMatrix::from_columns(gens, d);
    let snf = ring.smith_normal_form(&g);
    if snf.exponents.iter().any(|&a| a != 0 && a != ring.ep()) {
        return Err(invariant("generated submodule is not a direct summand"));
    }
    let s = snf.exponents.iter().filter(|&&a| a == 0).count();
    Ok(snf.u_inv.column_range(0, s))
}
