mod common;

use std::collections::BTreeSet;

use breuil::decomposition::mf_membership;
use breuil::hom::find_isomorphism;
use breuil::simples::*;
use breuil::{hom, GlobalParams, IsoResult};
use common::*;
use num_bigint::BigUint;

#[test]
fn small_simples() {
    let p = params(5, 1, 1);
    let m0 = simple(p, &[0]);
    assert_eq!((m0.rank(), m0.fil_exponents()), (1, &[0usize][..]));
    assert_eq!(m0.frobenius_matrix().get(0, 0), &m0.ring().one());
    let m1 = simple(p, &[1]);
    assert_eq!(m1.fil_exponents(), &[1]);
    assert!(m1.is_valid());
    assert!(simple(p, &[1, 0]).is_valid());
    assert!(SimpleDescriptor::new(p, vec![2]).is_err());
}

#[test]
fn shift_equivalence_examples() {
    let p = params(5, 1, 1);
    let d = |w: &[usize]| SimpleDescriptor::new(p, w.to_vec()).unwrap();
    assert!(is_shift_equivalent(&d(&[1, 0]), &d(&[0, 1])));
    assert!(!is_shift_equivalent(&d(&[0]), &d(&[1])));
}

#[test]
fn shift_equivalence_agrees_with_isomorphism() {
    for (p, e, r) in [(5, 1, 1), (7, 1, 2), (5, 2, 1)] {
        let params = params(p, e, r);
        let er = params.er();
        let mut descs = Vec::new();
        for h in 1..=3 {
            for w in brute_force_classes(er, h) {
                let d = SimpleDescriptor::new(params, w).unwrap();
                descs.push(d.clone());
                if h > 1 {
                    descs.push(d.rotate(1));
                }
            }
        }
        for a in &descs {
            for b in &descs {
                if a.period() != b.period() {
                    continue;
                }
                let (x, y) = (make_simple(a).unwrap(), make_simple(b).unwrap());
                let iso = matches!(find_isomorphism(&x, &y, &mut rng(1)).unwrap(), IsoResult::Isomorphic(_));
                assert_eq!(iso, is_shift_equivalent(a, b), "{:?} {:?}", a.digits(), b.digits());
            }
        }
    }
}

#[test]
fn enumeration_examples() {
    let p = params(5, 1, 1);
    let digits = |h| enumerate_simples(p, h).unwrap().iter().map(|d| d.digits().to_vec()).collect::<Vec<_>>();
    assert_eq!(digits(1), vec![vec![0], vec![1]]);
    assert_eq!(digits(2), vec![vec![0, 1]]);
    assert_eq!(enumerate_simples(params(7, 1, 2), 3).unwrap().len(), 8);
}

#[test]
fn enumeration_matches_brute_force() {
    for (p, e, r) in [(5, 1, 1), (7, 1, 2), (7, 3, 1), (7, 1, 4), (11, 1, 5)] {
        let params = params(p, e, r);
        let er = params.er();
        let mut h = 1;
        while (er + 1).pow(h as u32) <= 100_000 {
            let listed: Vec<Vec<usize>> = enumerate_simples(params, h).unwrap().iter().map(|d| d.digits().to_vec()).collect();
            let brute: Vec<Vec<usize>> = brute_force_classes(er, h).into_iter().collect();
            assert_eq!(listed, brute, "er = {er}, h = {h}");
            assert_eq!(BigUint::from(listed.len()), lyndon_count(er as u64 + 1, h as u64));
            h += 1;
        }
    }
}

#[test]
fn classifying_rationals() {
    let p = params(5, 1, 1);
    let t = classifying_rational(&SimpleDescriptor::new(p, vec![1, 0]).unwrap());
    assert_eq!((t.numerator, t.denominator), (BigUint::from(5u32), BigUint::from(24u32)));
    let z = classifying_rational(&SimpleDescriptor::new(p, vec![0]).unwrap());
    assert_eq!(z.numerator, BigUint::from(0u32));
    for (pp, e, r) in [(5, 1, 1), (7, 1, 2), (7, 3, 1)] {
        let params = params(pp, e, r);
        for h in 1..=3 {
            for d in enumerate_simples(params, h).unwrap() {
                for k in 0..h {
                    let t = classifying_rational(&d.rotate(k));
                    assert_eq!(t.times_p(pp), classifying_rational(&d.rotate(k + 1)));
                }
            }
        }
    }
}

#[test]
fn canonical_numerator_separates_classes() {
    let params = params(7, 3, 1);
    let mut seen = BTreeSet::new();
    for h in 1..=3 {
        for d in enumerate_simples(params, h).unwrap() {
            let n = canonical_numerator(&d);
            for k in 0..h {
                assert_eq!(canonical_numerator(&d.rotate(k)), n);
            }
            assert!(seen.insert((h, n)));
        }
    }
}

#[test]
fn endomorphism_dimensions() {
    let p1 = params(5, 1, 1);
    let p2 = GlobalParams::new(5, 1, 1, 2).unwrap();
    let e0 = SimpleDescriptor::new(p1, vec![0]).unwrap();
    assert_eq!(endomorphism_field_degree(&e0), 1);
    let m = make_simple(&e0).unwrap();
    assert_eq!(hom(&m, &m).unwrap().len(), 1);
    let d2 = SimpleDescriptor::new(p2, vec![1, 0]).unwrap();
    let m2 = make_simple(&d2).unwrap();
    assert_eq!(hom(&m2, &m2).unwrap().len(), endomorphism_field_degree(&d2));
    let m21 = simple(p1, &[1, 0]);
    assert_eq!(hom(&m21, &m21).unwrap().len(), 1);
}

#[test]
fn simples_are_valid_pairwise_orthogonal_and_in_mf() {
    for (p, e, r) in [(5, 1, 1), (5, 2, 1)] {
        let params = params(p, e, r);
        let all: Vec<_> = (1..=3).flat_map(|h| enumerate_simples(params, h).unwrap()).collect();
        let objs: Vec<_> = all.iter().map(|d| make_simple(d).unwrap()).collect();
        for (i, x) in objs.iter().enumerate() {
            assert!(x.is_valid());
            assert!(mf_membership(x).unwrap().all());
            for (j, y) in objs.iter().enumerate() {
                let dim = hom(x, y).unwrap().len();
                if i == j {
                    assert_eq!(dim, 1);
                } else {
                    assert_eq!(dim, 0, "{:?} -> {:?}", all[i].digits(), all[j].digits());
                }
            }
        }
    }
}
