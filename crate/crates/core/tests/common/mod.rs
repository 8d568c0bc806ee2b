//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use breuil::abelian::a_span_k_basis;
use breuil::random::random_object;
use breuil::simples::{make_simple_over, SimpleDescriptor};
use breuil::{hom, AMatrix, APoly, BreuilModule, CoeffRing, FieldElem, GlobalParams, Morphism};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const PARAM_SETS: [(u32, u32, u32); 4] = [(5, 1, 1), (7, 1, 2), (5, 2, 1), (7, 3, 1)];

pub fn params(p: u32, e: u32, r: u32) -> GlobalParams {
    GlobalParams::new(p, e, r, 1).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn simple(params: GlobalParams, digits: &[usize]) -> BreuilModule {
    breuil::simples::make_simple(&SimpleDescriptor::new(params, digits.to_vec()).unwrap()).unwrap()
}

pub fn random_objects(params: GlobalParams, count: usize, max_rank: usize, seed: u64) -> Vec<BreuilModule> {
    use rand::Rng;
    let ring = CoeffRing::new(params).unwrap();
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=max_rank);
            random_object(&ring, d, &mut rng).unwrap()
        })
        .collect()
}

/// The object of rank two with `n = (0, 2)`, `phi(e_1) = e_2`, `phi(u^2 e_2) = e_1 + u e_2`.
pub fn ramified_datum() -> (CoeffRing, Vec<usize>, AMatrix) {
    let ring = CoeffRing::new(GlobalParams::new(5, 2, 1, 1).unwrap()).unwrap();
    let frob = AMatrix::from_rows(
        vec![vec![ring.zero(), ring.one()], vec![ring.one(), ring.u_pow(1)]],
        2,
    )
    .unwrap();
    (ring, vec![0, 2], frob)
}

/// Lexicographically least rotation by trying every shift.
pub fn naive_canonical(w: &[usize]) -> Vec<usize> {
    (0..w.len())
        .map(|k| {
            let mut r = w.to_vec();
            r.rotate_left(k);
            r
        })
        .min()
        .unwrap()
}

/// Classes of digit cycles of exact period `h` over `0..=er`, by exhaustive listing.
pub fn brute_force_classes(er: usize, h: usize) -> BTreeSet<Vec<usize>> {
    let alphabet = er + 1;
    let total = alphabet.pow(h as u32);
    let mut out = BTreeSet::new();
    for mut idx in 0..total {
        let mut w = vec![0; h];
        for slot in w.iter_mut() {
            *slot = idx % alphabet;
            idx /= alphabet;
        }
        let rotations: BTreeSet<Vec<usize>> = (0..h)
            .map(|k| {
                let mut r = w.clone();
                r.rotate_left(k);
                r
            })
            .collect();
        if rotations.len() == h {
            out.insert(naive_canonical(&w));
        }
    }
    out
}

fn mod_p_nullity(p: u32, mut rows: Vec<Vec<u32>>, ncols: usize) -> usize {
    let p64 = p as u64;
    let inv = |a: u32| -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut k = p64 - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % p64;
            }
            b = b * b % p64;
            k >>= 1;
        }
        r as u32
    };
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv(rows[rank][c]) as u64;
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * s % p64) as u32;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u64 + (p64 - f) * y as u64) % p64) as u32;
                }
            }
        }
        rank += 1;
    }
    ncols - rank
}

fn flatten_vec(ring: &CoeffRing, v: &[APoly]) -> Vec<u32> {
    let deg = ring.field().degree();
    let mut out = Vec::new();
    for a in v {
        for m in 0..ring.ep() {
            let c = a.coeff(m);
            out.extend((0..deg).map(|l| c.coeff(l)));
        }
    }
    out
}

/// Whether every entry of `f` respects the adapted filtrations.
pub fn fil_compatible(x: &BreuilModule, y: &BreuilModule, f: &AMatrix) -> bool {
    let ep = x.ring().ep();
    (0..y.rank()).all(|i| {
        (0..x.rank()).all(|j| {
            let o = f.get(i, j).ord() + x.fil_exponents()[j];
            o >= y.fil_exponents()[i] || o >= ep
        })
    })
}

/// `phi_r` of `Y` on a vector already known to lie in `Fil Y`.
fn phi_of(y: &BreuilModule, v: &[APoly]) -> Vec<APoly> {
    let ring = y.ring();
    let mut acc = ring.vec_zero(y.rank());
    for (i, a) in v.iter().enumerate() {
        let n = y.fil_exponents()[i];
        let c = ring.frobenius(&ring.shift_down(a, n));
        acc = ring.vec_add(&acc, &ring.vec_mul(&c, &y.frobenius_matrix().column(i)));
    }
    acc
}

fn n_of(m: &BreuilModule, v: &[APoly]) -> Vec<APoly> {
    let ring = m.ring();
    let coordinatewise: Vec<APoly> = v.iter().map(|a| ring.derivation(a)).collect();
    ring.vec_add(&coordinatewise, &ring.mat_vec(m.monodromy_matrix(), v))
}

/// Flattened `F phi_X - phi_Y F` and `F N_X - N_Y F` on the generators, for a
/// filtration-compatible `F`.
pub fn morphism_residue(x: &BreuilModule, y: &BreuilModule, f: &AMatrix) -> Vec<u32> {
    let ring = x.ring();
    let mut out = Vec::new();
    for j in 0..x.rank() {
        let lhs = ring.mat_vec(f, &x.frobenius_matrix().column(j));
        let image = ring.vec_shift_up(&f.column(j), x.fil_exponents()[j]);
        let rhs = phi_of(y, &image);
        out.extend(flatten_vec(ring, &ring.vec_sub(&lhs, &rhs)));
        let lhs = ring.mat_vec(f, &x.monodromy_matrix().column(j));
        let rhs = n_of(y, &f.column(j));
        out.extend(flatten_vec(ring, &ring.vec_sub(&lhs, &rhs)));
    }
    out
}

pub fn is_morphism(x: &BreuilModule, y: &BreuilModule, f: &AMatrix) -> bool {
    fil_compatible(x, y, f) && morphism_residue(x, y, f).iter().all(|&c| c == 0)
}

/// `dim_{F_p} Hom(X, Y)` from the full system in all `d_Y d_X ep f` coefficients.
pub fn brute_force_hom_dimension(x: &BreuilModule, y: &BreuilModule) -> usize {
    let ring = x.ring();
    let field = ring.field();
    let ep = ring.ep();
    let deg = field.degree();
    let (dx, dy) = (x.rank(), y.rank());
    let mut columns = Vec::new();
    for i in 0..dy {
        for j in 0..dx {
            for m in 0..ep {
                for l in 0..deg {
                    let allowed = m + x.fil_exponents()[j] >= y.fil_exponents()[i] || m + x.fil_exponents()[j] >= ep;
                    if !allowed {
                        continue;
                    }
                    let mut f = ring.mat_zero(dy, dx);
                    f.set(i, j, ring.monomial(field.basis(l), m));
                    columns.push(morphism_residue(x, y, &f));
                }
            }
        }
    }
    let n = columns.len();
    if n == 0 {
        return 0;
    }
    let len = columns[0].len();
    let rows: Vec<Vec<u32>> = (0..len).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
    mod_p_nullity(field.p(), rows, n)
}

/// Socle rank from images of Hom out of every simple of period at most the
/// rank, after extending scalars by each of `degrees`. A twisted form only
/// becomes visible over a field that splits it, so the largest rank wins.
pub fn socle_rank_by_hom(m: &BreuilModule, degrees: &[u32]) -> usize {
    degrees.iter().map(|&deg| socle_rank_over(m, deg)).max().unwrap_or(0)
}

fn socle_rank_over(m: &BreuilModule, degree: u32) -> usize {
    let d = m.rank();
    let big = m.scalar_extend(degree).unwrap();
    let ring = big.ring().clone();
    let mut images = Vec::new();
    for h in 1..=d {
        for desc in breuil::simples::enumerate_simples(big.params(), h).unwrap() {
            let s = make_simple_over(&ring, &desc).unwrap();
            for f in hom(&s, &big).unwrap() {
                images.extend((0..f.cols()).map(|j| f.column(j)));
            }
        }
    }
    a_span_k_basis(&big, &images).len() / ring.ep()
}

/// Zero test on `F_p`-vectors of field elements.
pub fn all_zero(v: &[FieldElem]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn morphism(x: &BreuilModule, y: &BreuilModule, f: AMatrix) -> Morphism {
    Morphism::new(x.clone(), y.clone(), f).unwrap()
}
