use breuil::cyclotomic::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

const ODD_PRIMES: [u32; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// `(X - 1)^n` reduced modulo `X^p - 1` and then `Phi_p`, in exact integers.
fn exact_power(p: usize, n: u64) -> Vec<BigInt> {
    let mut folded = vec![BigInt::zero(); p];
    let mut binom = BigInt::one();
    for k in 0..=n {
        // coefficient of X^k in (X - 1)^n
        let term = if (n - k) % 2 == 0 { binom.clone() } else { -binom.clone() };
        folded[(k % p as u64) as usize] += term;
        binom = binom * (n - k) / (k + 1);
    }
    let top = folded[p - 1].clone();
    folded[..p - 1].iter().map(|c| c - &top).collect()
}

#[test]
fn t_congruence_examples() {
    for p in [3, 5, 7] {
        assert!(verify_t_congruence(p).unwrap());
    }
    // at p = 3 the power is exactly -27
    let exact = exact_power(3, 6);
    assert_eq!(exact, vec![BigInt::from(-27), BigInt::zero()]);
}

#[test]
fn t_congruence_matches_exact_expansion() {
    for p in ODD_PRIMES {
        let exact = exact_power(p as usize, u64::from(p) * u64::from(p - 1));
        let modulus = BigInt::from(p).pow(p + 1);
        let mut expected = vec![BigInt::zero(); p as usize - 1];
        expected[0] = -BigInt::from(p).pow(p);
        let congruent = exact.iter().zip(&expected).all(|(a, b)| (a - b).mod_floor(&modulus).is_zero());
        assert!(congruent, "p = {p}");
        assert!(verify_t_congruence(p).unwrap(), "p = {p}");
        let reduced = CyclotomicElem::new(p, modulus.clone(), &exact);
        let lhs = CyclotomicElem::new(p, modulus.clone(), &[BigInt::from(-1), BigInt::one()]).pow(u64::from(p) * u64::from(p - 1));
        assert_eq!(lhs, reduced);
        // the congruence is sharp in the sign
        assert_ne!(lhs, CyclotomicElem::constant(p, modulus, BigInt::from(p).pow(p)));
    }
}

#[test]
fn b_sum_examples() {
    let ints = |p| a_coefficients(p).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
    assert_eq!(ints(5), vec![0, -5, 5, -5]);
    assert_eq!(ints(3), vec![0, -3]);
    for p in [3, 5, 7] {
        assert!(verify_b_sum(p).unwrap());
    }
}

#[test]
fn b_sum_holds_for_small_odd_primes() {
    for p in ODD_PRIMES {
        let a = a_coefficients(p).unwrap();
        assert_eq!(a.len(), p as usize - 1);
        let mut sum = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            let mut c = BigInt::one();
            for j in 0..i as u32 {
                c = c * (p - 1 - j) / (j + 1);
            }
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            assert_eq!(*ai, sign * c - 1);
            assert!((ai % BigInt::from(p)).is_zero());
            sum += ai / BigInt::from(p);
        }
        assert_eq!(sum, BigInt::from(-1));
        assert!(verify_b_sum(p).unwrap());
    }
}

#[test]
fn non_odd_primes_are_rejected() {
    for n in [2, 9, 15, 1] {
        assert!(verify_t_congruence(n).is_err());
        assert!(verify_b_sum(n).is_err());
    }
}
