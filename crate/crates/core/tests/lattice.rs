use liouville_core::arith::algebraic::AlgebraicNumber;
use liouville_core::arith::ball::ComplexBall;
use liouville_core::arith::rational::{rat, Rational};
use liouville_core::lattice::lll::default_delta;
use liouville_core::lattice::{
    dirichlet_small_value, hermite_normal_form, lll_reduce, siegel_vanishing_polynomial, IntegerLattice, TargetCoord,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn box_polys(m: usize, t: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * t + 1) as u64;
    (0..side.pow(m as u32)).filter_map(move |mut k| {
        let mut c = vec![0i64; m];
        for x in c.iter_mut() {
            *x = (k % side) as i64 - t;
            k /= side;
        }
        c.iter().any(|&x| x != 0).then_some(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_keeps_the_lattice(rows in prop::collection::vec(prop::collection::vec(-40i64..40, 3), 3)) {
        let lat = IntegerLattice::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap();
        if let Ok(red) = lll_reduce(&lat, &default_delta()) {
            prop_assert_eq!(hermite_normal_form(&red.basis), hermite_normal_form(&lat.basis));
            // first vector within 2^{(n-1)/2} of every original vector
            let first: f64 = red.basis[0].iter().map(|x| x.to_f64().unwrap().powi(2)).sum();
            for b in &lat.basis {
                let l: f64 = b.iter().map(|x| x.to_f64().unwrap().powi(2)).sum();
                prop_assert!(first <= 4.0 * l + 1e-9);
            }
        }
    }

    #[test]
    fn dirichlet_never_loses_to_exhaustion_at_rationals(a in -60i64..60, b in 2i64..40, d in 1u32..3, t in 1u64..7) {
        let x = rat(a, b);
        let w = dirichlet_small_value(&[TargetCoord::Algebraic(AlgebraicNumber::from_rational(&x))], d, t).unwrap();
        let mut best: Option<Rational> = None;
        for c in box_polys(d as usize + 1, t as i64) {
            let mut v = Rational::zero();
            for &ci in c.iter().rev() {
                v = v * &x + Rational::from_integer(ci.into());
            }
            let v = v.abs();
            if !v.is_zero() && best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
        let best = best.unwrap().to_f64().unwrap();
        prop_assert!(w.search_complete);
        prop_assert!(w.polynomial.norm() <= BigInt::from(t));
        prop_assert!((w.value.mid() - best).abs() <= 1e-9 * best, "{} vs {}", w.value.mid(), best);
    }

    #[test]
    fn dirichlet_never_loses_to_exhaustion_at_complex_points(re in -1.5f64..1.5, im in 0.1f64..1.5, t in 1u64..6) {
        let z = TargetCoord::Ball(ComplexBall::from_f64(re, im, 0.0, 128));
        let w = dirichlet_small_value(&[z], 2, t).unwrap();
        let zc = Complex64::new(re, im);
        let best = box_polys(3, t as i64)
            .map(|c| (Complex64::new(c[0] as f64, 0.0) + zc * c[1] as f64 + zc * zc * c[2] as f64).norm())
            .fold(f64::INFINITY, f64::min);
        prop_assert!(w.value.mid() <= best * (1.0 + 1e-9) + 1e-12, "{} vs {}", w.value.mid(), best);
    }

    #[test]
    fn siegel_vanishes_exactly_within_bound(
        n_vars in 1usize..4,
        raw in prop::collection::vec((-9i64..10, 1i64..8), 0..30),
        count in 0usize..11,
    ) {
        let pts: Vec<Vec<Rational>> = raw
            .chunks(n_vars)
            .filter(|c| c.len() == n_vars)
            .take(count)
            .map(|c| c.iter().map(|&(a, b)| rat(a, b)).collect())
            .collect();
        // least degree with more monomials than points
        let mut d = 0u32;
        while liouville_core::poly::enumerate::monomials(n_vars, d).len() <= pts.len() {
            d += 1;
        }
        let r = siegel_vanishing_polynomial(&pts, n_vars, d).unwrap();
        prop_assert!(!r.polynomial.is_zero());
        for p in &pts {
            prop_assert!(r.polynomial.eval_rational(p).unwrap().is_zero());
        }
        prop_assert!(r.within_bound, "{} > {}", r.log_norm, r.siegel_bound);
    }
}

#[test]
fn witness_serializes() {
    let w = dirichlet_small_value(&[TargetCoord::E], 2, 10).unwrap();
    let j = serde_json::to_value(&w).unwrap();
    assert!(j["polynomial"].is_string() || j["polynomial"].is_object());
    assert!(j["pigeonhole_bound"].as_f64().unwrap() > 0.0);
    assert!(BigInt::from(10) >= w.polynomial.norm().abs());
}
