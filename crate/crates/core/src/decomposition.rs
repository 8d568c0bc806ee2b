//! Simple subobjects, socles, Jordan-Hölder factors and the MF criteria.

use num_integer::Integer;

use crate::abelian::{cokernel, subobject, summand_basis};
use crate::error::{invariant, Error, Result};
use crate::field::{Field, FieldElem};
use crate::hom::Morphism;
use crate::linalg::{self, PrimeField, Scalars};
use crate::matrix::{AMatrix, AVec};
use crate::module::BreuilModule;
use crate::simples::{enumerate_simples, exact_period, least_rotation, make_simple_over, SimpleDescriptor};

type KVec = Vec<FieldElem>;

/// Outcome of the three equivalent MF tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MfCriteria {
    pub fil_splits: bool,
    pub adapted_basis_in_image: bool,
    pub monodromy_vanishes_on_image: bool,
}

impl MfCriteria {
    pub fn all(&self) -> bool {
        self.fil_splits && self.adapted_basis_in_image && self.monodromy_vanishes_on_image
    }
}

/// `k`-basis of `u^i M_0` where `M_0` is the image of `phi_r`.
fn image_layer(m: &BreuilModule, i: usize) -> Vec<AVec> {
    let ring = m.ring();
    let p = ring.p();
    let mut out = Vec::new();
    let mut shift = i;
    while shift < ring.ep() {
        for j in 0..m.rank() {
            out.push(ring.vec_shift_up(&m.frobenius_matrix().column(j), shift));
        }
        shift += p;
    }
    out
}

pub fn mf_membership(m: &BreuilModule) -> Result<MfCriteria> {
    let ring = m.ring();
    let field = ring.field().as_ref();
    let d = m.rank();
    let dim = d * ring.ep();
    let er = m.params().er();
    let fil = m.fil_k_basis();

    let mut total = 0;
    for i in 0..ring.p() {
        let layer: Vec<KVec> = image_layer(m, i).iter().map(|v| m.to_k_vector(v)).collect();
        total += linalg::intersect(field, &fil, &layer, dim).len();
    }
    let fil_splits = total == fil.len();

    // jumps of the filtration F'_i = { c in k^d : u^i G c in Fil }
    let g = m.frobenius_matrix();
    let mut jump_sum = 0;
    for i in 0..er {
        let mut rows = Vec::new();
        for row in 0..d {
            for deg in i..m.fil_exponents()[row] {
                rows.push((0..d).map(|j| g.get(row, j).coeff(deg - i)).collect::<KVec>());
            }
        }
        jump_sum += d - linalg::nullspace(field, &rows, d).len();
    }
    let adapted_basis_in_image = jump_sum == m.fil_exponents().iter().sum::<usize>();

    let canonical = ring.mat_neg(&ring.mat_mul(&ring.mat_derivation(g), m.frobenius_inverse()?));
    let monodromy_vanishes_on_image = m.with_monodromy(canonical)?.is_valid();

    let c = MfCriteria {
        fil_splits,
        adapted_basis_in_image,
        monodromy_vanishes_on_image,
    };
    if !(c.all() || (!c.fil_splits && !c.adapted_basis_in_image && !c.monodromy_vanishes_on_image)) {
        return Err(invariant(format!("MF criteria disagree: {c:?}")));
    }
    Ok(c)
}

/// Constant terms of the coordinates of `x` in the basis `phi_r(u^{n_j} e_j)`.
fn reduce_mod_up(m: &BreuilModule, x: &[crate::ring::APoly]) -> Result<KVec> {
    Ok(m.frobenius_coordinates(x)?.iter().map(|a| a.coeff(0)).collect())
}

/// A nonzero element of `M_0 \ u M_0` killed by `N`.
fn monodromy_free_start(m: &BreuilModule) -> Result<AVec> {
    let ring = m.ring();
    let field = ring.field().as_ref();
    let basis = image_layer(m, 0);
    let images: Vec<KVec> = basis.iter().map(|v| m.to_k_vector(&m.monodromy_apply(v))).collect();
    let kernel = map_kernel(field, &images, m.rank() * ring.ep());
    let coef = kernel.first().ok_or_else(|| invariant("N has no kernel on the image of phi_r"))?;
    let mut y = ring.vec_zero(m.rank());
    for (c, b) in coef.iter().zip(&basis) {
        y = ring.vec_add(&y, &ring.vec_scale(*c, b));
    }
    let coords = m.frobenius_coordinates(&y)?;
    let low = ring.vec_ord(&coords);
    let z = ring.mat_vec(m.frobenius_matrix(), &coords.iter().map(|a| ring.shift_down(a, low)).collect::<AVec>());
    let x = m.phi_tilde(&z)?;
    if m.monodromy_apply(&x).iter().any(|a| !a.is_zero()) {
        return Err(invariant("normalised start is not killed by N"));
    }
    Ok(x)
}

/// Coefficient vectors `c` with `sum c_i images_i = 0`.
fn map_kernel(field: &Field, images: &[KVec], dim: usize) -> Vec<KVec> {
    let rows: Vec<KVec> = (0..dim).map(|k| images.iter().map(|v| v[k]).collect()).collect();
    linalg::nullspace(field, &rows, images.len())
}

fn chain(m: &BreuilModule, start: &[crate::ring::APoly], len: usize) -> Result<Vec<AVec>> {
    let mut out = vec![start.to_vec()];
    while out.len() < len {
        let next = m.phi_tilde(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// `x_{n+1} = sum lambda_i x_i` holding exactly, with `lambda_1 != 0`.
struct CyclicRelation {
    start: AVec,
    lambda: KVec,
}

fn cyclic_relation(m: &BreuilModule, mut start: AVec) -> Result<CyclicRelation> {
    let ring = m.ring();
    let field = ring.field().as_ref();
    let d = m.rank();
    let lambda = loop {
        let xs = chain(m, &start, d + 1)?;
        let mut reduced: Vec<KVec> = Vec::new();
        let mut found = None;
        for x in &xs {
            let r = reduce_mod_up(m, x)?;
            if !reduced.is_empty() {
                let rows: Vec<KVec> = (0..d).map(|k| reduced.iter().map(|v| v[k]).collect()).collect();
                if let Some((sol, _)) = linalg::solve_affine(field, &rows, &r, reduced.len()) {
                    found = Some(sol);
                    break;
                }
            }
            reduced.push(r);
        }
        let lambda = found.ok_or_else(|| invariant("reductions of the Frobenius chain stay independent"))?;
        let first = lambda.iter().position(|c| !c.is_zero()).ok_or_else(|| invariant("zero relation"))?;
        if first == 0 {
            break lambda;
        }
        start = xs[first].clone();
    };
    let n = lambda.len();
    let lead_inv = field.inv(lambda[0])?;
    for _ in 0..=m.params().e {
        let xs = chain(m, &start, n + 1)?;
        let mut defect = xs[n].clone();
        for (l, x) in lambda.iter().zip(&xs) {
            defect = ring.vec_sub(&defect, &ring.vec_scale(*l, x));
        }
        if defect.iter().all(|a| a.is_zero()) {
            return Ok(CyclicRelation { start, lambda });
        }
        start = ring.vec_add(&start, &ring.vec_scale(lead_inv, &defect));
    }
    Err(invariant("successive approximation did not converge"))
}

/// A simple subobject together with its inclusion from `make_simple(descriptor)`.
#[derive(Clone, Debug)]
pub struct SimpleSubobject {
    pub descriptor: SimpleDescriptor,
    pub inclusion: Morphism,
}

/// `lcm(1, ..., d)`: after extending scalars by this degree every period `h <= d` divides `f`.
pub fn extension_degree(rank: usize) -> u32 {
    (1..=rank.max(1) as u32).fold(1, |acc, k| acc.lcm(&k))
}

/// Extracts a simple subobject defined over the residue field of `m` by
/// normalising a Frobenius chain in the kernel of `N`.
pub fn simple_subobject(m: &BreuilModule) -> Result<SimpleSubobject> {
    if m.rank() == 0 {
        return Err(Error::Invalid("the zero object has no simple subobject".into()));
    }
    let ring = m.ring();
    let field = ring.field().clone();
    let mut start = monodromy_free_start(m)?;
    let mut last_support = usize::MAX;
    let (rel, digits) = loop {
        let rel = cyclic_relation(m, start)?;
        let n = rel.lambda.len();
        let xs = chain(m, &rel.start, 2 * n)?;
        let digits: Vec<usize> = xs.iter().map(|x| m.min_exponent(x)).collect();
        let support: Vec<usize> = (0..n).filter(|&s| !rel.lambda[s].is_zero()).collect();
        if support.len() >= last_support {
            return Err(invariant("support of the cyclic relation did not shrink"));
        }
        let bad = (0..n).find(|&a| support.iter().any(|&s| digits[s + a] != digits[support[0] + a]));
        match bad {
            None => break (rel, digits[..n].to_vec()),
            Some(a) => {
                last_support = support.len();
                start = xs[a + 1].clone();
            }
        }
    };
    let n = rel.lambda.len();
    let t = (0..n).filter(|&s| !rel.lambda[s].is_zero()).fold(n, |acc, s| acc.gcd(&s));
    let q = n / t;
    let xs = chain(m, &rel.start, n)?;

    // fixed points of a -> Lambda sigma^t(a) on span(x_0, x_t, ..., x_{(q-1)t})
    let deg = field.degree();
    let pf = PrimeField(field.p());
    let apply = |a: &[FieldElem]| -> KVec {
        let s: KVec = a.iter().map(|&c| field.frob_pow(c, t)).collect();
        let mut out = vec![field.zero(); q];
        for c in 1..q {
            out[c] = s[c - 1];
        }
        for c in 0..q {
            out[c] = field.add(out[c], field.mul(rel.lambda[c * t], s[q - 1]));
        }
        out
    };
    let nunk = q * deg;
    let mut columns = Vec::with_capacity(nunk);
    for idx in 0..nunk {
        let mut a = vec![field.zero(); q];
        a[idx / deg] = field.basis(idx % deg);
        let img = apply(&a);
        let col: Vec<u32> = (0..nunk)
            .map(|k| {
                let v = img[k / deg].coeff(k % deg);
                if k == idx {
                    pf.sub(v, 1)
                } else {
                    v
                }
            })
            .collect();
        columns.push(col);
    }
    let rows: Vec<Vec<u32>> = (0..nunk).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
    let fixed = linalg::nullspace(&pf, &rows, nunk);
    let sol = fixed.first().ok_or(Error::NoRationalSimple)?;
    let mut v = ring.vec_zero(m.rank());
    for c in 0..q {
        let coeffs: Vec<i64> = sol[c * deg..(c + 1) * deg].iter().map(|&x| x as i64).collect();
        v = ring.vec_add(&v, &ring.vec_scale(field.from_coeffs(&coeffs)?, &xs[c * t]));
    }
    let step = |x: &AVec, s: usize| m.eval_phi(&ring.vec_shift_up(x, digits[s]));
    let mut vs = vec![v.clone()];
    for s in 0..t {
        vs.push(step(&vs[s], s)?);
    }
    if vs[t] != v {
        return Err(invariant("fixed vector is not fixed"));
    }
    let tp = exact_period(&digits[..t]);
    let mut w = ring.vec_zero(m.rank());
    for c in 0..t / tp {
        w = ring.vec_add(&w, &vs[c * tp]);
    }
    let mut bs = vec![w];
    for s in 0..tp {
        let next = step(&bs[s], s)?;
        bs.push(next);
    }
    if bs[tp] != bs[0] {
        return Err(invariant("averaged vector does not close up"));
    }
    let desc = SimpleDescriptor::new(m.params(), digits[..tp].to_vec())?;
    let rot = least_rotation(desc.digits());
    let descriptor = desc.rotate(rot);
    let cols: Vec<AVec> = (0..tp).map(|i| bs[(rot + i) % tp].clone()).collect();
    let source = make_simple_over(ring, &descriptor)?;
    let inclusion = Morphism::new(source, m.clone(), AMatrix::from_columns(&cols, m.rank()))?;
    Ok(SimpleSubobject { descriptor, inclusion })
}

/// Subspace `{ sum c_i b_i : sum sigma^t(c_i) images_i in target }`.
fn semilinear_preimage(field: &Field, basis: &[KVec], images: &[KVec], twist: usize, target: &[KVec], dim: usize) -> Vec<KVec> {
    let mut stacked: Vec<KVec> = images.to_vec();
    stacked.extend(target.iter().map(|v| v.iter().map(|&c| field.neg(c)).collect::<KVec>()));
    let deg = field.degree();
    let back = (deg - twist % deg) % deg;
    let vecs: Vec<KVec> = map_kernel(field, &stacked, dim)
        .iter()
        .map(|y| {
            let mut x = vec![field.zero(); dim];
            for (c, b) in y.iter().zip(basis) {
                let c = field.frob_pow(*c, back);
                if c.is_zero() {
                    continue;
                }
                for k in 0..dim {
                    x[k] = field.add(x[k], field.mul(c, b[k]));
                }
            }
            x
        })
        .collect();
    linalg::span_basis(field, &vecs, dim)
}

/// For a digit cycle `delta`, the part of `M` on which
/// `Psi = phi_r u^{delta_h} ... phi_r u^{delta_1}` is defined, kills `N`
/// and acts bijectively. Returns a `k`-basis of it.
fn bijective_part(m: &BreuilModule, delta: &[usize]) -> Result<Vec<KVec>> {
    let ring = m.ring();
    let field = ring.field().as_ref();
    let d = m.rank();
    let ep = ring.ep();
    let dim = d * ep;
    let h = delta.len();
    let domain = |digit: usize| -> Vec<KVec> {
        let mut out = Vec::new();
        for j in 0..d {
            for k in m.fil_exponents()[j].saturating_sub(digit)..ep {
                let mut v = vec![field.zero(); dim];
                v[j * ep + k] = field.one();
                out.push(v);
            }
        }
        out
    };
    let partial = |v: &KVec, steps: usize| -> Result<KVec> {
        let mut x = m.from_k_vector(v);
        for &digit in &delta[..steps] {
            x = m.eval_phi(&ring.vec_shift_up(&x, digit))?;
        }
        Ok(m.to_k_vector(&x))
    };
    let monodromy_images: Vec<KVec> = (0..dim)
        .map(|k| {
            let mut v = vec![field.zero(); dim];
            v[k] = field.one();
            m.to_k_vector(&m.monodromy_apply(&m.from_k_vector(&v)))
        })
        .collect();
    let ker_n: Vec<KVec> = map_kernel(field, &monodromy_images, dim);
    let mut space = linalg::intersect(field, &ker_n, &domain(delta[0]), dim);
    for i in 1..h {
        if space.is_empty() {
            return Ok(space);
        }
        let images = space.iter().map(|v| partial(v, i)).collect::<Result<Vec<_>>>()?;
        space = semilinear_preimage(field, &space, &images, i, &domain(delta[i]), dim);
    }
    loop {
        if space.is_empty() {
            return Ok(space);
        }
        let images = space.iter().map(|v| partial(v, h)).collect::<Result<Vec<_>>>()?;
        let next = semilinear_preimage(field, &space, &images, h, &space, dim);
        if next.len() == space.len() {
            break;
        }
        space = next;
    }
    loop {
        let images = space.iter().map(|v| partial(v, h)).collect::<Result<Vec<_>>>()?;
        let next = linalg::span_basis(field, &images, dim);
        if next.len() == space.len() {
            return Ok(space);
        }
        space = next;
    }
}

/// Largest semisimple subobject, with its isotypic multiplicities.
#[derive(Clone, Debug)]
pub struct Socle {
    pub module: BreuilModule,
    pub inclusion: Morphism,
    pub components: Vec<(SimpleDescriptor, usize)>,
}

pub fn socle(m: &BreuilModule) -> Result<Socle> {
    let ring = m.ring();
    let d = m.rank();
    let mut generators: Vec<AVec> = Vec::new();
    let mut components = Vec::new();
    for h in 1..=d {
        for desc in enumerate_simples(m.params(), h)? {
            let part = bijective_part(m, desc.digits())?;
            if part.is_empty() {
                continue;
            }
            for v in &part {
                let mut x = m.from_k_vector(v);
                for &digit in desc.digits() {
                    generators.push(x.clone());
                    x = m.eval_phi(&ring.vec_shift_up(&x, digit))?;
                }
            }
            components.push((desc, part.len()));
        }
    }
    let basis = summand_basis(m, &generators)?;
    let expected: usize = components.iter().map(|(desc, mult)| desc.period() * mult).sum();
    if basis.cols() != expected {
        return Err(invariant(format!("socle rank {} differs from isotypic count {expected}", basis.cols())));
    }
    let (module, inclusion) = subobject(m, &basis)?;
    Ok(Socle {
        module,
        inclusion,
        components,
    })
}

pub fn is_semisimple(m: &BreuilModule) -> Result<bool> {
    Ok(socle(m)?.module.rank() == m.rank())
}

/// Composition factors in filtration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JhReport {
    pub factors: Vec<SimpleDescriptor>,
    /// Degree over `F_p` of the residue field the factors were computed over.
    pub extension_field_degree: u32,
}

impl JhReport {
    pub fn length(&self) -> usize {
        self.factors.len()
    }

    /// Factors sorted canonically, for comparisons that ignore the order.
    pub fn multiset(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.factors.iter().map(|f| f.digits().to_vec()).collect();
        out.sort();
        out
    }
}

/// Factors read off the socle series `0 ⊂ soc(M) ⊂ soc^2(M) ⊂ ... ⊂ M`.
pub fn jordan_holder(m: &BreuilModule) -> Result<JhReport> {
    let mut factors = Vec::new();
    let mut current = m.clone();
    while current.rank() > 0 {
        let soc = socle(&current)?;
        if soc.module.rank() == 0 {
            return Err(invariant("nonzero object with zero socle"));
        }
        for (desc, mult) in &soc.components {
            for _ in 0..*mult {
                factors.push(desc.with_params(m.params())?);
            }
        }
        current = cokernel(&soc.inclusion)?.0;
    }
    Ok(JhReport {
        factors,
        extension_field_degree: m.params().f,
    })
}

/// Factors obtained by repeated extraction after extending scalars by
/// `lcm(1..d)`. Fails with `NoRationalSimple` when some step has no
/// fixed vector over the extended field.
pub fn jordan_holder_by_extraction(m: &BreuilModule) -> Result<JhReport> {
    let ext = m.scalar_extend(extension_degree(m.rank()))?;
    let mut factors = Vec::new();
    let mut current = ext.clone();
    while current.rank() > 0 {
        let sub = simple_subobject(&current)?;
        factors.push(sub.descriptor.with_params(m.params())?);
        current = cokernel(&sub.inclusion)?.0;
    }
    Ok(JhReport {
        factors,
        extension_field_degree: ext.params().f,
    })
}
