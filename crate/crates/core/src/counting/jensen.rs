//! Zero counts in `Δ_r` from Jensen's formula on the circle `|z| = r₁`.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::map::AnalyticFunction;
use crate::arith::ball::ComplexBall;
use crate::arith::enclosure::Enclosure;
use crate::arith::fastball::{horner_ball, F64Ball};
use crate::arith::rational::{rat, serde_rational, Rational};
use crate::error::{Error, Result};

const MIN_ARCS: usize = 1024;
const MAX_ARCS: usize = 1 << 15;

#[derive(Debug, Clone, Serialize)]
pub struct JensenCertificate {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational")]
    pub r1: Rational,
    /// Order of vanishing at the center, divided out first.
    pub z_power: u32,
    /// `log|h(0)|` for `g = z^k·h`.
    pub log_center: Enclosure,
    /// Upper bound for `(1/2π)∫ log|h(r₁e^{iθ})| dθ`.
    pub mean_log_upper: f64,
    /// Lower bound for `log(r₁/r)`.
    pub log_ratio: f64,
    pub arcs: usize,
    /// Zeros of `g` in `|z| < r`, with multiplicity, are at most this.
    pub bound: u64,
}

/// `(1 + r)/2`.
pub fn default_r1(r: &Rational) -> Rational {
    (r + rat(1, 1)) / rat(2, 1)
}

/// Upper bound for the mean of `log|h|` over `|z| = r₁`: each of `n` arcs is
/// covered by a ball and `log sup` over the ball is averaged.
fn mean_log_upper(coeffs: &[F64Ball], tail: f64, r1: f64, n: usize) -> f64 {
    let step = std::f64::consts::TAU / n as f64;
    // chord from the arc midpoint to its ends, plus node rounding
    let rad = r1 * (step / 2.0) * (1.0 + 1e-12) + r1 * 1e-14;
    let mut acc = 0.0f64;
    for j in 0..n {
        let th = step * (j as f64 + 0.5);
        let z = F64Ball::new(r1 * th.cos(), r1 * th.sin(), rad);
        let s = horner_ball(coeffs, &z).abs_upper() + tail;
        acc += s.ln() + 4e-16 * s.ln().abs() + 1e-300;
    }
    let m = acc / n as f64;
    m + m.abs() * 1e-14 + 1e-14
}

pub fn jensen_zero_bound(g: &AnalyticFunction, r: &Rational, r1: &Rational) -> Result<JensenCertificate> {
    if !r.is_positive() || r1 <= r {
        return Err(Error::InvalidParameter("need 0 < r < r₁".into()));
    }
    let r1f = r1.to_f64().unwrap();
    if r1f >= g.radius() {
        return Err(Error::RadiusExceeded { r: r1f, validity: g.radius() });
    }
    let k = g.coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroAtCenter)?;
    if g.tail.order().is_some_and(|o| o <= k) {
        return Err(Error::ZeroAtCenter);
    }
    let h: Vec<F64Ball> = g.coeffs[k..].iter().map(|c| ComplexBall::from_rational(c, 128).to_f64_ball()).collect();
    // |R(z)/z^k| ≤ tail(r₁)/r₁^k on the circle
    let tail = g.tail.bound(r1f * (1.0 + 1e-14)) / (r1f * (1.0 - 1e-14)).powi(k as i32) * (1.0 + 1e-12);
    let log_center = ComplexBall::from_rational(&g.coeffs[k], 128).ln_abs()?;
    let ratio = ComplexBall::from_rational(&(r1 / r), 128).ln_abs()?.lo;
    let count = |mean: f64| -> u64 {
        let q = (mean - log_center.lo) / ratio;
        if q <= 0.0 {
            0
        } else {
            q.floor() as u64
        }
    };
    let mut arcs = MIN_ARCS;
    let mut mean = mean_log_upper(&h, tail, r1f, arcs);
    let mut best = count(mean);
    while arcs < MAX_ARCS {
        let m = mean_log_upper(&h, tail, r1f, arcs * 2);
        let c = count(m);
        if c >= best {
            break;
        }
        arcs *= 2;
        mean = m;
        best = c;
    }
    Ok(JensenCertificate {
        r: r.clone(),
        r1: r1.clone(),
        z_power: k as u32,
        log_center,
        mean_log_upper: mean,
        log_ratio: ratio,
        arcs,
        bound: k as u64 + best,
    })
}
