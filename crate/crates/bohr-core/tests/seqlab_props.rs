//! Sequence-lab oracles: rearrangement against a comparison sort, partial-sum
//! asymptotics for the named families, and the block-counterexample
//! certificate.

use bohr_core::kernel::PrimeTable;
use bohr_core::seqlab::{
    b_functional, counterexample25, decreasing_rearrangement, space_membership, Membership,
    SeqSpace, SequenceSpec, VerdictBasis,
};
use proptest::prelude::*;

const MERTENS: f64 = 0.261_497_212_847_642_8;

#[test]
fn rearrangement_matches_sort_oracle_on_large_vector() {
    let mut rng = 123456789u64;
    let mut values = Vec::with_capacity(10_000);
    for _ in 0..10_000 {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        values.push((rng >> 11) as f64 / (1u64 << 53) as f64);
    }
    let got = decreasing_rearrangement(&values);
    let mut oracle = values.clone();
    oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert_eq!(got, oracle);
    // Multiset preserved.
    let mut a = got.clone();
    let mut b = values.clone();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn rearrangement_idempotent_and_permutation_invariant(
        mut values in prop::collection::vec(0.0f64..10.0, 1..200),
        seed in any::<u64>()
    ) {
        let once = decreasing_rearrangement(&values);
        prop_assert_eq!(decreasing_rearrangement(&once), once.clone());
        // Cheap deterministic shuffle.
        let mut s = seed | 1;
        for i in (1..values.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            values.swap(i, (s as usize) % (i + 1));
        }
        prop_assert_eq!(decreasing_rearrangement(&values), once);
    }

    #[test]
    fn b_checkpoints_monotone_under_domination(
        base in prop::collection::vec(0.0f64..0.9, 1024..1100),
        bump in 0.0f64..0.1
    ) {
        let table = PrimeTable::new(64, 0);
        let lo: Vec<f64> = {
            let mut v = decreasing_rearrangement(&base);
            v.truncate(1024);
            v
        };
        let hi: Vec<f64> = lo.iter().map(|x| x + bump).collect();
        let zl = SequenceSpec::sampled(lo).unwrap();
        let zh = SequenceSpec::sampled(hi).unwrap();
        let el = b_functional(&zl, 1024, &table).unwrap();
        let eh = b_functional(&zh, 1024, &table).unwrap();
        for (a, b) in el.checkpoints.iter().zip(eh.checkpoints.iter()) {
            prop_assert!(a.1 <= b.1 + 1e-12);
        }
    }
}

#[test]
fn powerlog_divergent_case_grows_like_half_log_squared() {
    let table = PrimeTable::new(64, 0);
    let z = SequenceSpec::power_log(1.0, 0.5, 0.5).unwrap();
    assert_eq!(z.analytic_b_limit(), Some(f64::INFINITY));
    let n = 1u64 << 16;
    let est = b_functional(&z, n, &table).unwrap();
    let v = est.value_at(n).unwrap();
    // Oracle: sum ln(j+1)/j ~ (ln n)^2 / 2, so the ratio is ~ (ln n)/2.
    let expect = (n as f64).ln() / 2.0;
    assert!((v - expect).abs() < 0.15 * expect, "{v} vs {expect}");
    assert!(v > 2f64.ln() + 1.0, "well past the certified lower threshold");
}

#[test]
fn prime_power_checkpoints_match_mertens_oracle() {
    let n = 100_000u64;
    let table = PrimeTable::new(n as usize, 0);
    let z = SequenceSpec::prime_power(1.0, 0.5).unwrap();
    let est = b_functional(&z, n, &table).unwrap();
    let v = est.value_at(n).unwrap();
    let pn = table.nth_prime(n as u32).unwrap() as f64;
    let oracle = (pn.ln().ln() + MERTENS) / (n as f64).ln();
    assert!((v - oracle).abs() < 0.01 * oracle, "{v} vs {oracle}");
    assert_eq!(est.b_value, 0.0);
    assert_eq!(est.basis, VerdictBasis::Analytic);
}

#[test]
fn counterexample_b_estimate_stays_below_one() {
    let table = PrimeTable::new(64, 0);
    let (z, cert) = counterexample25(2, 6).unwrap();
    assert!(cert.holds);
    let est = b_functional(&z, 1 << 17, &table).unwrap();
    for &(n, v) in &est.checkpoints {
        assert!(v < 1.0, "checkpoint at {n} is {v}");
    }
    // The k = 2 block bound covers the horizon block and is already < 1.
    let bound2 = cert.block_bounds.iter().find(|&&(k, _)| k == 2).unwrap().1;
    assert!(bound2 < 1.0);
    assert!(est.value_at(1 << 17).unwrap() <= bound2);
}

#[test]
fn membership_spec_examples() {
    let table = PrimeTable::new(4096, 0);
    let half_primes = SequenceSpec::prime_power(1.0, 0.5).unwrap();
    assert_eq!(
        space_membership(&half_primes, SeqSpace::Lp(2.0), 4096, &table).unwrap().verdict,
        Membership::Out
    );
    assert_eq!(
        space_membership(&half_primes, SeqSpace::L20, 4096, &table).unwrap().verdict,
        Membership::In
    );

    let (ce, _) = counterexample25(2, 6).unwrap();
    let out = space_membership(&ce, SeqSpace::WeakLq(2.0), 100_000, &table).unwrap();
    assert_eq!(out.verdict, Membership::Out);
    // sqrt(n) r_n peaks at the largest block boundary inside the horizon.
    assert_eq!(out.witness.unwrap().0, 4096);

    // root-log-over-n: outside the closure band (the divergent PowerLog).
    let over = SequenceSpec::power_log(1.0, 0.5, 0.5).unwrap();
    assert_eq!(
        space_membership(&over, SeqSpace::L2Log, 4096, &table).unwrap().verdict,
        Membership::In
    );
    assert_eq!(
        space_membership(&over, SeqSpace::WeakLq(2.0), 4096, &table).unwrap().verdict,
        Membership::Out
    );
}

#[test]
fn eventually_zero_tag_certifies_everything() {
    let table = PrimeTable::new(64, 0);
    let z = SequenceSpec::finitely_supported(vec![0.5, 0.25, 0.125]).unwrap();
    for space in [SeqSpace::Lp(1.0), SeqSpace::WeakLq(2.0), SeqSpace::L20, SeqSpace::L2Log] {
        let r = space_membership(&z, space, 4096, &table).unwrap();
        assert_eq!(r.verdict, Membership::In);
        assert_eq!(r.basis, VerdictBasis::Analytic);
    }
    let est = b_functional(&z, 4096, &table).unwrap();
    assert_eq!(est.b_value, 0.0);
}
