use liouville_core::arith::rational::{int, rat, Rational};
use liouville_core::measure::replay::recheck_replay;
use liouville_core::measure::{
    padic_small_value_measure, replay_interpolation_argument, small_value_area, ReplayOptions,
};
use liouville_core::poly::{BallPolynomial, DiskSpec, IntPolynomial, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn monomial(c: i64, d: usize) -> IntPolynomial {
    let mut v = vec![0i64; d + 1];
    v[d] = c;
    IntPolynomial::from_i64(&v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `{|c z^d|_p ≤ p^{-m}‖c z^d‖}` is `{v(z) ≥ ⌈m/d⌉}`.
    #[test]
    fn padic_monomials_match_closed_form(c in 1i64..50, d in 1usize..7, pi in 0usize..3, m in 1u32..5) {
        let p = [2u64, 3, 5][pi];
        let got = padic_small_value_measure(&monomial(c, d), p, m, 1).unwrap();
        let depth = m.div_ceil(d as u32);
        let expected = Rational::new(BigInt::one(), BigInt::from(p).pow(depth));
        prop_assert_eq!(got.value, expected);
    }

    #[test]
    fn padic_measure_is_resolution_free(
        coeffs in prop::collection::vec(-30i64..30, 2..8),
        pi in 0usize..3,
        m in 1u32..5,
        extra in 1u32..4,
    ) {
        prop_assume!(*coeffs.last().unwrap() != 0);
        let p = [2u64, 3, 5][pi];
        let poly = IntPolynomial::from_i64(&coeffs);
        let a = padic_small_value_measure(&poly, p, m, 1).unwrap();
        let b = padic_small_value_measure(&poly, p, m, a.k + extra).unwrap();
        prop_assert_eq!(&a.value, &b.value);
        prop_assert!(a.corrected_bound_holds);
        // the reported fraction is count / p^k
        let den = BigInt::from(p).pow(b.k);
        prop_assert_eq!(b.value * Rational::from_integer(den), Rational::from_integer(b.count.parse::<BigInt>().unwrap()));
    }

    #[test]
    fn replay_certificates_survive_doubled_precision(coeffs in prop::collection::vec(-6i64..7, 2..4), seed in 0u64..1000) {
        prop_assume!(*coeffs.last().unwrap() != 0);
        let p = IntPolynomial::from_i64(&coeffs);
        let d = p.degree().unwrap();
        let f = TruncatedSeries::polynomial(BallPolynomial::from_int(&p, 256));
        let disk = DiskSpec::with_reference(rat(3, 10), rat(3, 5)).unwrap();
        let opts = ReplayOptions { samples: 4000, seed, ..ReplayOptions::default() };
        if let Ok(rec) = replay_interpolation_argument(&f, &disk, 0.9, 1, d, &opts) {
            let (rem, two) = recheck_replay(&f, &disk, &rec, 512).unwrap();
            prop_assert_eq!(rem, rec.remainder_certified);
            prop_assert_eq!(two, rec.factor_two_certified);
            // degree ≤ βd: the interpolant reproduces f
            prop_assert!(rec.remainder_certified);
        }
    }
}

#[test]
fn linear_area_matches_geometry() {
    // 2z + 1 on r = 1: ‖P‖ = 3, and the set is the disk |z + 1/2| ≤ 3ε/2,
    // inside Δ₁ for ε ≤ 1/3
    let p = IntPolynomial::from_i64(&[1, 2]);
    for eps in [0.3, 0.1, 0.01] {
        let est = small_value_area(&p, &int(1), eps, 200_000, 17).unwrap();
        let exact = std::f64::consts::PI * (1.5 * eps) * (1.5 * eps);
        assert!((est.estimate - exact).abs() <= est.confidence_radius, "{eps}: {} vs {exact}", est.estimate);
    }
    let half = small_value_area(&p, &rat(1, 2), 0.5, 10_000, 3).unwrap();
    assert!(half.estimate <= std::f64::consts::PI / 4.0 + half.confidence_radius);
}
