//! Exhaustive and property-based checks for the integer/index layer.

use bohr_core::kernel::{
    binomial, enumerate_lambda, enumerate_sorted_tuples, lambda_count, multinomial, IndexTuple,
    MultiIndex, PrimeTable,
};
use proptest::prelude::*;

#[test]
fn factor_integer_round_trip_exhaustive() {
    let table = PrimeTable::new(9592, 100_000); // all primes below 1e5
    for n in 1..=100_000u64 {
        let alpha = table.factor(n).unwrap();
        assert_eq!(table.integer(&alpha).unwrap(), n);
    }
}

#[test]
fn every_table_entry_is_prime_by_trial_division() {
    let table = PrimeTable::new(2000, 0);
    for &p in table.primes() {
        assert!(p >= 2);
        let mut d = 2u64;
        while d * d <= p {
            assert!(p % d != 0, "{p} divisible by {d}");
            d += 1;
        }
    }
    for w in table.primes().windows(2) {
        assert!(w[0] < w[1]);
    }
}

#[test]
fn tuple_bijection_round_trip_small_degrees() {
    for m in 0..=5u32 {
        for k in 1..=5u32 {
            let mut count = 0u128;
            for t in enumerate_sorted_tuples(m, k) {
                let tuple = IndexTuple::new(t.clone());
                let alpha = tuple.to_multi_index().unwrap();
                assert_eq!(IndexTuple::from_multi_index(&alpha).values(), &t[..]);
                assert_eq!(tuple.class_size().unwrap(), multinomial(&alpha).unwrap());
                count += 1;
            }
            assert_eq!(Some(count), lambda_count(m, k));
        }
    }
    // J(3,3) has exactly 10 tuples.
    assert_eq!(enumerate_sorted_tuples(3, 3).count(), 10);
}

#[test]
fn multinomial_theorem() {
    for m in 0..=6u32 {
        for k in 1..=6u32 {
            let total: u128 =
                enumerate_lambda(m, k).map(|a| multinomial(&a).unwrap()).sum();
            assert_eq!(total, (k as u128).pow(m), "m={m} k={k}");
        }
    }
}

#[test]
fn lambda_counts_match_binomials() {
    for m in 0..=8u32 {
        for k in 1..=8u32 {
            let got = enumerate_lambda(m, k).count() as u128;
            assert_eq!(Some(got), binomial((m + k - 1) as u64, m as u64));
        }
    }
}

#[test]
fn lambda_enumeration_has_no_duplicates_and_constant_degree() {
    let all: Vec<MultiIndex> = enumerate_lambda(4, 4).collect();
    for a in &all {
        assert_eq!(a.degree(), 4);
        assert!(a.max_position().unwrap_or(1) <= 4);
    }
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), all.len());
}

#[test]
fn omega_is_completely_additive() {
    let table = PrimeTable::new(9592, 100_000);
    for n in 1..=316u64 {
        for m in 1..=316u64 {
            let dn = table.factor(n).unwrap().degree();
            let dm = table.factor(m).unwrap().degree();
            let dnm = table.factor(n * m).unwrap().degree();
            assert_eq!(dnm, dn + dm);
        }
    }
}

proptest! {
    #[test]
    fn factor_round_trip_random(n in 1u64..100_000) {
        let table = PrimeTable::new(9592, 0); // no cache: exercise trial division
        let alpha = table.factor(n).unwrap();
        prop_assert_eq!(table.integer(&alpha).unwrap(), n);
    }

    #[test]
    fn monomial_mul_matches_integer_product(a in 1u64..300, b in 1u64..300) {
        let table = PrimeTable::new(100, 1000);
        let ia = table.factor(a).unwrap();
        let ib = table.factor(b).unwrap();
        prop_assert_eq!(table.integer(&ia.monomial_mul(&ib)).unwrap(), a * b);
    }
}
