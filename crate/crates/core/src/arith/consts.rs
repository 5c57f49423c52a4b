//! Certified enclosures of the few real constants the experiments need.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::ComplexBall;
use super::dyadic::Dyadic;

fn fixed_point_ball(sum: BigInt, err_units: u64, w: u32, prec: u32) -> ComplexBall {
    let mid = Dyadic::new(sum, -(w as i64));
    let rad = Dyadic::new(BigInt::from(err_units), -(w as i64));
    ComplexBall::new(mid, Dyadic::zero(), rad, prec).add(&ComplexBall::zero(prec))
}

// Σ (-1)^n / ((2n+1) k^(2n+1)) scaled by 2^w; returns (sum, error units)
fn atan_inv(k: u64, w: u32) -> (BigInt, u64) {
    let one = BigInt::one() << w as u64;
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = &one / &k;
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * n + 1);
        if term.is_zero() {
            break;
        }
        if n % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power = &power / &k2;
        n += 1;
    }
    // each floor loses < 1 unit in the power and < 1 in the quotient;
    // the alternating remainder is below one unit
    (sum, 2 * n + 2)
}

/// Enclosure of π by Machin's formula.
pub fn pi_ball(prec: u32) -> ComplexBall {
    let w = prec + 24;
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    let sum = a * 16 - b * 4;
    fixed_point_ball(sum, 16 * ea + 4 * eb, w, prec)
}

/// Enclosure of e = Σ 1/n!.
pub fn e_ball(prec: u32) -> ComplexBall {
    let w = prec + 24;
    let mut term = BigInt::one() << w as u64;
    let mut sum = term.clone();
    let mut n: u64 = 1;
    loop {
        term = &term / BigInt::from(n);
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    fixed_point_ball(sum, 2 * n + 6, w, prec)
}

/// Enclosure of `sqrt(q)` for rational `q ≥ 0`.
pub fn sqrt_ball(q: &BigRational, prec: u32) -> ComplexBall {
    assert!(!q.is_negative(), "sqrt of negative rational");
    let w = prec + 16;
    let ab = q.numer() * q.denom();
    let s = (ab << (2 * w) as u64).sqrt();
    // sqrt(a/b) = sqrt(ab)/b ∈ [s, s+1] / (b 2^w)
    let num = Dyadic::new(s, -(w as i64));
    let den = Dyadic::from_int(q.denom().clone());
    let (mid, err) = Dyadic::div(&num, &den, prec + 8);
    let (unit, uerr) = Dyadic::div(&Dyadic::pow2(-(w as i64)), &den, 32);
    ComplexBall::new(mid, Dyadic::zero(), &(&err + &unit) + &uerr, prec)
}

/// Enclosure of the real `n`-th root `q^(1/n)` for rational `q > 0`.
pub fn nth_root_ball(q: &BigRational, n: u32, prec: u32) -> ComplexBall {
    assert!(q.is_positive() && n >= 1);
    let w = prec + 16;
    // floor((a * b^(n-1) * 2^(n w))^(1/n)) / (b 2^w)
    let scaled = q.numer() * q.denom().pow(n - 1) << (n as u64 * w as u64);
    let s = scaled.nth_root(n);
    let num = Dyadic::new(s, -(w as i64));
    let den = Dyadic::from_int(q.denom().clone());
    let (mid, err) = Dyadic::div(&num, &den, prec + 8);
    let (unit, uerr) = Dyadic::div(&Dyadic::pow2(-(w as i64)), &den, 32);
    ComplexBall::new(mid, Dyadic::zero(), &(&err + &unit) + &uerr, prec)
}
