mod common;

use std::collections::BTreeMap;

use breuil::simples::{enumerate_simples, SimpleDescriptor};
use breuil::tame::*;
use breuil::GlobalParams;
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;

fn desc(params: GlobalParams, digits: &[usize]) -> SimpleDescriptor {
    SimpleDescriptor::new(params, digits.to_vec()).unwrap()
}

fn all_simples(params: GlobalParams, max_h: usize) -> Vec<SimpleDescriptor> {
    (1..=max_h).flat_map(|h| enumerate_simples(params, h).unwrap()).collect()
}

/// Digits of the purely periodic expansion of `a / b`, `0 <= a < b`, by long division.
fn periodic_digits(p: u64, a: u64, b: u64) -> Vec<u64> {
    let mut seen = BTreeMap::new();
    let mut digits = Vec::new();
    let mut x = a;
    while !seen.contains_key(&x) {
        seen.insert(x, digits.len());
        digits.push(x * p / b);
        x = x * p % b;
    }
    digits[seen[&x]..].to_vec()
}

#[test]
fn weight_vector_examples() {
    let p = params(5, 1, 1);
    let w = weight_vector(&desc(p, &[1, 0])).unwrap();
    assert_eq!((w.m, w.s), (vec![0, 1], vec![1, 5]));
    for (pp, e, r) in [(5, 1, 1), (7, 1, 2), (7, 3, 1)] {
        let params = params(pp, e, r);
        let er = params.er();
        let w = weight_vector(&desc(params, &[0])).unwrap();
        assert_eq!((w.m, w.s), (vec![er], vec![er as u128]));
    }
}

#[test]
fn weight_vectors_match_direct_sums() {
    for &(p, e, r) in &PARAM_SETS {
        let params = params(p, e, r);
        let er = params.er();
        for d in all_simples(params, 4) {
            let h = d.period();
            let w = weight_vector(&d).unwrap();
            let m: Vec<usize> = d.digits().iter().map(|&n| er - n).collect();
            assert_eq!(w.m, m);
            for i in 0..h {
                let s: u128 = (0..h).map(|j| m[(i + j) % h] as u128 * (p as u128).pow((h - 1 - j) as u32)).sum();
                assert_eq!(w.s[i], s);
                let q = (p as u128).pow(h as u32) - 1;
                assert_eq!(p as u128 * w.s[i], w.s[(i + 1) % h] + m[i] as u128 * q);
            }
            assert!(weight_recursion_holds(params, &w).unwrap());
            assert!(rational_character_identity(&d).unwrap());
        }
    }
}

#[test]
fn character_examples() {
    let p = params(5, 1, 1);
    let c = tame_character(&desc(p, &[1, 0])).unwrap();
    assert_eq!((c.level, c.exponent), (2, 1));
    assert_eq!(tame_character(&desc(p, &[0, 1])).unwrap(), c);
    let c = tame_character(&desc(p, &[0])).unwrap();
    assert_eq!((c.level, c.exponent), (1, 1));
    assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"level":1,"exponent":1}"#);
}

#[test]
fn characters_separate_classes_and_ignore_rotation() {
    for (p, e, r) in [(5, 1, 1), (7, 1, 2), (5, 1, 3), (7, 3, 1)] {
        let params = params(p, e, r);
        let mut seen = BTreeMap::new();
        for d in all_simples(params, 4) {
            let c = tame_character(&d).unwrap();
            assert_eq!(c.level, d.period());
            for k in 0..d.period() {
                assert_eq!(tame_character(&d.rotate(k)).unwrap(), c);
            }
            if let Some(prev) = seen.insert(c, d.digits().to_vec()) {
                panic!("{prev:?} and {:?} share a character", d.digits());
            }
        }
    }
}

#[test]
fn canonical_characters_are_minimal() {
    let p = 5u128;
    for level in 1..=3usize {
        let q = p.pow(level as u32) - 1;
        for s in 0..q {
            let c = TameCharacter::canonical(5, level, s).unwrap();
            // the same character viewed at the original level
            let lifted = c.exponent * (q / (p.pow(c.level as u32) - 1));
            let orbit: Vec<u128> = (0..level).map(|a| s * p.pow(a as u32) % q).collect();
            assert!(orbit.contains(&lifted));
            for l in 1..c.level {
                if level % l == 0 {
                    assert_ne!(s % (q / (p.pow(l as u32) - 1)), 0);
                }
            }
            let at_own_level: Vec<u128> = (0..c.level).map(|a| c.exponent * p.pow(a as u32) % (p.pow(c.level as u32) - 1)).collect();
            assert_eq!(c.exponent, *at_own_level.iter().min().unwrap());
        }
    }
}

#[test]
fn inertia_weights_examples() {
    let p = params(5, 1, 1);
    let m = simple(p, &[0]).direct_sum(&simple(p, &[1])).unwrap();
    let w = inertia_weights(&m).unwrap();
    let mut flat: Vec<usize> = w.weights.iter().flatten().copied().collect();
    flat.sort();
    assert_eq!(flat, vec![0, 1]);
    assert!(w.within_bound);
    assert_eq!(w.total_level(), m.rank());
    for d in all_simples(params(5, 2, 1), 3) {
        let w = inertia_weights(&breuil::simples::make_simple(&d).unwrap()).unwrap();
        assert!(w.weights.iter().flatten().all(|&x| x <= 2));
    }
}

#[test]
fn inertia_weights_are_bounded_on_random_objects() {
    for &(p, e, r) in &PARAM_SETS {
        let params = params(p, e, r);
        for m in random_objects(params, 15, 3, 600 + p as u64) {
            let w = inertia_weights(&m).unwrap();
            assert!(w.weights.iter().flatten().all(|&x| x <= params.er()));
            assert!(w.characters.iter().all(|c| c.digits(p).iter().all(|&x| x <= params.er())));
            assert_eq!(w.total_level(), m.rank());
        }
    }
}

#[test]
fn system_s_example() {
    let d = desc(params(5, 1, 1), &[0]);
    let sys = SystemS::new(&d, -1).unwrap();
    let sols = sys.solutions().unwrap();
    assert_eq!(sols.len(), 5);
    let f = &sys.field;
    let minus_one = f.from_int(-1);
    for s in &sols[1..] {
        assert_eq!(s.s, vec![1]);
        assert_eq!(f.pow(s.eps, 4), minus_one);
    }
    assert!(sols[0].eps.is_zero());
    assert!(sys.satisfies(&sys.components(&sols[0])));
}

#[test]
fn system_s_solutions() {
    for &(p, e, r) in &PARAM_SETS {
        let params = params(p, e, r);
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for d in all_simples(params, 3) {
            let h = d.period();
            let sys = SystemS::new(&d, sign).unwrap();
            let sols = sys.solutions().unwrap();
            let ph = (p as u128).pow(h as u32);
            assert_eq!(sols.len() as u128, ph);
            let f = &sys.field;
            let target = f.pow(f.from_int(sign as i64), h as u128);
            let mut eps: Vec<_> = sols.iter().map(|s| f.to_index(s.eps)).collect();
            eps.sort();
            eps.dedup();
            assert_eq!(eps.len(), sols.len());
            for s in &sols {
                assert!(sys.satisfies(&sys.components(s)));
                if !s.eps.is_zero() {
                    assert_eq!(f.pow(s.eps, ph - 1), target);
                    assert_eq!(f.pow(sys.generator, s.eps_log.unwrap()), s.eps);
                }
            }
            // homogeneous: differences stay in the solution set
            let step = (sols.len() / 7).max(1);
            for a in sols.iter().step_by(step) {
                for b in sols.iter().step_by(step) {
                    let diff = sys.difference(a, b);
                    assert!(sys.satisfies(&sys.components(&diff)));
                    assert!(eps.binary_search(&f.to_index(diff.eps)).is_ok());
                }
            }
        }
    }
}

#[test]
fn galois_orbits_realise_the_character() {
    for (p, e, r) in [(5, 1, 1), (7, 1, 2), (5, 2, 1)] {
        let params = params(p, e, r);
        for d in all_simples(params, 2) {
            let h = d.period();
            let q = (p as u128).pow(h as u32) - 1;
            let sys = SystemS::new(&d, -1).unwrap();
            let sols = sys.solutions().unwrap();
            let sol = &sols[1];
            assert_eq!(sys.galois_orbit(sol, 0).unwrap(), *sol);
            let mut x = sol.clone();
            let mut size = 0u128;
            loop {
                x = sys.galois_orbit(&x, 1).unwrap();
                size += 1;
                assert!(sys.satisfies(&sys.components(&x)));
                if x == *sol {
                    break;
                }
            }
            assert_eq!(q % size, 0);
            let j = sys.character_exponent(sol).unwrap();
            let c = TameCharacter::canonical(p, h, j).unwrap();
            assert_eq!(c, tame_character(&d).unwrap(), "{:?}", d.digits());
        }
    }
}

#[test]
fn digit_predicate_matches_long_division() {
    let base = params(5, 1, 1);
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    assert!(a_ss_exponent_test(base, &q(5, 24)).unwrap());
    assert!(!a_ss_exponent_test(base, &q(23, 24)).unwrap());
    assert!(a_ss_exponent_test(base, &q(0, 1)).unwrap());
    assert!(a_ss_exponent_test(base, &q(3, 10)).is_err());
    for (p, e, r) in [(5, 1, 1), (7, 1, 2), (5, 2, 1)] {
        let params = common::params(p, e, r);
        let er = params.er() as u64;
        let p = p as u64;
        for b in 1..60u64 {
            if b % p == 0 {
                continue;
            }
            for a in 0..b * params.e as u64 {
                let got = a_ss_exponent_test(params, &q(a as i64, b as i64)).unwrap();
                let expect = periodic_digits(p, a % b, b).iter().all(|&d| d <= er);
                assert_eq!(got, expect, "{a}/{b}");
            }
        }
    }
}
