use liouville_core::arith::algebraic::AlgebraicNumber;
use liouville_core::arith::ball::ComplexBall;
use liouville_core::arith::rational::{int, rat};
use liouville_core::lattice::TargetCoord;
use liouville_core::poly::enumerate::monomials;
use liouville_core::poly::IntPolynomial;
use liouville_core::satype::scan::sa_deficiency_scan_with;
use liouville_core::satype::{borel_cantelli_tail, fullness_survey, sa_deficiency_scan, ScanOptions, Verdict};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Minimum of |P(ζ)| over nonvanishing box polynomials, with 256-bit balls.
fn oracle_min(zeta: &[ComplexBall], d: u32, h: i64) -> f64 {
    let mons = monomials(zeta.len(), d);
    let side = (2 * h + 1) as u64;
    let mut best = f64::INFINITY;
    for mut k in 0..side.pow(mons.len() as u32) {
        let mut c = vec![];
        for _ in 0..mons.len() {
            c.push(BigInt::from((k % side) as i64 - h));
            k /= side;
        }
        let p = IntPolynomial::new(zeta.len(), mons.iter().cloned().zip(c));
        if p.is_zero() {
            continue;
        }
        let v = p.eval_ball(zeta).unwrap();
        if v.contains_zero() {
            continue;
        }
        best = best.min(v.abs_upper().to_f64_bounds().1);
    }
    best
}

fn check_against_oracle(zeta: &[TargetCoord], balls: &[ComplexBall], d_max: u32, h_max: u64, opts: &ScanOptions) {
    let scan = sa_deficiency_scan_with(zeta, zeta.len() as f64 + 1.0, d_max, h_max, opts).unwrap();
    for c in &scan.cells {
        let want = oracle_min(balls, c.d, c.h as i64);
        assert!((c.min_value.mid() - want).abs() <= 1e-9 * want, "d={} H={}: {} vs {want}", c.d, c.h, c.min_value.mid());
    }
}

#[test]
fn scan_matches_doubled_precision_oracle() {
    use liouville_core::arith::consts::{e_ball, pi_ball};
    let opts = ScanOptions::default();
    check_against_oracle(&[TargetCoord::Pi], &[pi_ball(256)], 3, 8, &opts);
    check_against_oracle(&[TargetCoord::E, TargetCoord::Pi], &[e_ball(256), pi_ball(256)], 1, 4, &opts);
    // every cell from the lattice path
    let lattice_only = ScanOptions { brute_force_limit: 0.0, ..ScanOptions::default() };
    check_against_oracle(&[TargetCoord::E], &[e_ball(256)], 3, 8, &lattice_only);
}

#[test]
fn minima_are_monotone() {
    let z = TargetCoord::Ball(ComplexBall::from_f64(0.3141, 0.52, 0.0, 128));
    let s = sa_deficiency_scan(&[z], 2.0, 4, 32).unwrap();
    for a in &s.cells {
        for b in &s.cells {
            if b.d >= a.d && b.h >= a.h {
                assert!(b.min_value.mid() <= a.min_value.mid());
            }
        }
    }
}

#[test]
fn high_degree_algebraic_stays_unflagged() {
    let z = TargetCoord::Algebraic(AlgebraicNumber::real_root(&int(2), 5).unwrap());
    let s = sa_deficiency_scan(&[z], 2.0, 4, 4).unwrap();
    assert!(s.arithmetically_generic);
    assert!(s.cells.iter().all(|c| c.exact_zeros == 0));
}

#[test]
fn flagged_witness_vanishes_exactly() {
    let z = AlgebraicNumber::real_root(&rat(3, 2), 3).unwrap();
    let s = sa_deficiency_scan(&[TargetCoord::Algebraic(z.clone())], 2.0, 3, 4).unwrap();
    let w = s.vanishing_witness.expect("2z³ − 3 lies in the family");
    assert!(liouville_core::arith::zero::is_exact_zero(&w, &[z]).unwrap());
}

#[test]
fn scan_serializes() {
    let s = sa_deficiency_scan(&[TargetCoord::Pi], 2.0, 2, 4).unwrap();
    let csv = s.to_csv();
    assert!(csv.starts_with("d,H,min_log_value,A_req,argmin_poly_id\n"));
    assert_eq!(csv.lines().count(), 1 + s.cells.len());
    let j = serde_json::to_value(&s).unwrap();
    assert_eq!(j["polynomials"].as_array().unwrap().len(), s.polynomials.len());
}

#[test]
fn survey_fraction_drops_along_grid() {
    let grid = [0.05, 0.2, 0.5, 1.0, 2.0];
    let r = fullness_survey(1, 2.0, &grid, 200, 4, 16, 11).unwrap();
    assert!(r.fractions.windows(2).all(|w| w[0].1 >= w[1].1));
    assert!(r.fractions.last().unwrap().1 < r.fractions[0].1, "{:?}", r.fractions);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convergent_series_bounded_under_doubling(b1 in 2.1f64..6.0, b4 in 0.0f64..1.0, b3 in 1.1f64..3.0, b0 in 0.1f64..3.0, n in 1u32..3, dc in 1u32..6, hc in 1u64..40) {
        let r = borel_cantelli_tail(b0, b1, 1.0, b3, b4, n, dc, hc);
        prop_assert_eq!(r.verdict, Verdict::Converges);
        let total = r.partial_sum + r.tail_bound.unwrap();
        let big = borel_cantelli_tail(b0, b1, 1.0, b3, b4, n, 2 * dc, 2 * hc);
        prop_assert!(big.partial_sum <= total * (1.0 + 1e-12));
    }
}
