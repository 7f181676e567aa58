//! Transform and lift properties: involution, algebra homomorphism on
//! supports, and agreement of the lift with the vertical-line values.

use bohr_core::kernel::PrimeTable;
use bohr_core::series::{
    bohr_lift, bohr_transform, dirichlet_product_truncated, homogeneous_part,
    power_product_truncated, CoeffSeries,
};
use bohr_core::torusnum::{eval_poly, TorusPoint};
use bohr_core::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_twice_is_identity(
        terms in prop::collection::vec((1u64..100_000, coeff()), 50)
    ) {
        let table = PrimeTable::new(9592, 100_000);
        let d = CoeffSeries::dirichlet(terms, &table).unwrap();
        let p = bohr_transform(&d, &table).unwrap();
        let back = bohr_transform(&p, &table).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn transform_is_multiplicative_on_supports(
        ta in prop::collection::vec((1u64..100, coeff()), 10),
        tb in prop::collection::vec((1u64..100, coeff()), 10)
    ) {
        let table = PrimeTable::new(1229, 10_000);
        let a = CoeffSeries::dirichlet(ta, &table).unwrap();
        let b = CoeffSeries::dirichlet(tb, &table).unwrap();
        // Support products stay below 1e4, so no truncation loss.
        let prod = dirichlet_product_truncated(&a, &b, 10_000, &table).unwrap();
        let lhs = bohr_transform(&prod, &table).unwrap();
        let pa = bohr_transform(&a, &table).unwrap();
        let pb = bohr_transform(&b, &table).unwrap();
        let rhs = power_product_truncated(&pa, &pb, u32::MAX).unwrap();
        let lt = lhs.power_terms().unwrap();
        let rt = rhs.power_terms().unwrap();
        prop_assert_eq!(lt.len(), rt.len());
        for (key, value) in lt {
            let other = rt[key];
            prop_assert!((value - other).norm() < 1e-12);
        }
    }
}

#[test]
fn lift_agrees_with_vertical_line_values() {
    let table = PrimeTable::new(30, 200);
    let terms: Vec<(u64, Complex64)> = (1..=40u64)
        .map(|n| (n, Complex64::new(1.0 / n as f64, (n as f64 * 0.37).sin())))
        .collect();
    let d = CoeffSeries::dirichlet(terms.clone(), &table).unwrap();
    let k = 12; // enough variables for every prime below 40
    let lift = bohr_lift(&d, k, &table).unwrap();
    for t in [0.0, 0.5, 1.7, -3.2, 11.0] {
        let angles: Vec<f64> = (1..=k)
            .map(|j| {
                let p = table.nth_prime(j).unwrap() as f64;
                (-t * p.ln()).rem_euclid(std::f64::consts::TAU)
            })
            .collect();
        let lifted = eval_poly(&lift, &TorusPoint::new(angles)).unwrap();
        let mut direct = Complex64::new(0.0, 0.0);
        for &(n, c) in &terms {
            direct += c * Complex64::from_polar(1.0, -t * (n as f64).ln());
        }
        assert!(
            (lifted - direct).norm() <= 1e-12 * direct.norm().max(1.0),
            "t={t}: {lifted} vs {direct}"
        );
    }
}

#[test]
fn homogeneous_parts_reconstruct_the_series() {
    let table = PrimeTable::new(100, 1000);
    let d = CoeffSeries::dirichlet(
        (1..=60u64).map(|n| (n, Complex64::new(n as f64, -(n as f64)))),
        &table,
    )
    .unwrap();
    let max_degree = (1..=60u64)
        .map(|n| table.factor(n).unwrap().degree())
        .max()
        .unwrap();
    let mut total = 0usize;
    let mut reconstructed: Vec<(u64, Complex64)> = Vec::new();
    for m in 0..=max_degree {
        let part = homogeneous_part(&d, m, &table).unwrap();
        assert!(part.is_empty() || part.homogeneity() == Some(m));
        total += part.len();
        for (&n, &c) in part.dirichlet_terms().unwrap() {
            reconstructed.push((n, c));
        }
    }
    assert_eq!(total, d.len());
    let rebuilt = CoeffSeries::dirichlet(reconstructed, &table).unwrap();
    assert_eq!(rebuilt, d);
}

#[test]
fn power_square_of_binomial_is_already_homogeneous() {
    use bohr_core::kernel::MultiIndex;
    let z1 = MultiIndex::unit(1);
    let z2 = MultiIndex::unit(2);
    let lin = CoeffSeries::power([
        (z1, Complex64::new(1.0, 0.0)),
        (z2, Complex64::new(1.0, 0.0)),
    ]);
    let sq = power_product_truncated(&lin, &lin, 4).unwrap();
    assert_eq!(sq.homogeneity(), Some(2));
    let table = PrimeTable::new(10, 100);
    let kept = homogeneous_part(&sq, 2, &table).unwrap();
    assert_eq!(kept, sq);
    let middle = sq.power_terms().unwrap()
        [&MultiIndex::from_entries([(1, 1), (2, 1)]).unwrap()];
    assert_eq!(middle, Complex64::new(2.0, 0.0));
}
