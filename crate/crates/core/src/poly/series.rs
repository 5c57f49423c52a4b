//! Truncated power series with a uniform remainder bound.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::ballpoly::BallPolynomial;
use super::supnorm::sup_norm_at_radius;
use crate::arith::ball::ComplexBall;
use crate::arith::dyadic::Dyadic;
use crate::arith::enclosure::Enclosure;
use crate::arith::fastball::{horner_ball, F64Ball};
use crate::arith::rational::Rational;
use crate::error::{Error, Result};

/// `f(z) = Σ c_k z^k + R(z)` with `|R(z)| ≤ tail` whenever `|z| ≤ radius`.
#[derive(Debug, Clone, Serialize)]
pub struct TruncatedSeries {
    pub poly: BallPolynomial,
    pub tail: f64,
    pub radius: f64,
    #[serde(skip)]
    fast: Vec<F64Ball>,
}

impl TruncatedSeries {
    pub fn new(poly: BallPolynomial, tail: f64, radius: f64) -> Result<Self> {
        if !(tail >= 0.0) || !(radius > 0.0) {
            return Err(Error::InvalidParameter("tail must be ≥ 0 and radius > 0".into()));
        }
        let fast = poly.to_f64_balls();
        Ok(TruncatedSeries { poly, tail, radius, fast })
    }

    /// A polynomial, exact on the whole plane.
    pub fn polynomial(poly: BallPolynomial) -> Self {
        Self::new(poly, 0.0, f64::INFINITY).unwrap()
    }

    /// `exp(z)` truncated after `terms` terms, valid on `|z| ≤ radius`.
    pub fn exp(terms: usize, radius: f64, prec: u32) -> Result<Self> {
        if terms == 0 || radius + 1.0 >= terms as f64 {
            return Err(Error::InvalidParameter("need more terms than radius + 1".into()));
        }
        let mut fact = BigInt::one();
        let mut coeffs = Vec::with_capacity(terms);
        for k in 0..terms {
            if k > 0 {
                fact *= k;
            }
            coeffs.push(ComplexBall::from_rational(&Rational::new(BigInt::one(), fact.clone()), prec));
        }
        // Σ_{k≥n} R^k/k! ≤ R^n/n! · 1/(1 − R/(n+1))
        let n = terms as f64;
        let mut lead = 1.0f64;
        for k in 1..=terms {
            lead *= radius / k as f64;
        }
        let tail = lead / (1.0 - radius / (n + 1.0)) * (1.0 + 1e-12);
        Self::new(BallPolynomial::new(coeffs), tail, radius)
    }

    pub fn eval_fast(&self, z: &F64Ball) -> F64Ball {
        let v = horner_ball(&self.fast, z);
        F64Ball::new(v.re, v.im, v.rad + self.tail)
    }

    pub fn eval_ball(&self, z: &ComplexBall) -> ComplexBall {
        self.poly.eval(z).inflate(&Dyadic::from_f64(self.tail))
    }

    /// Enclosure of `sup_{|z| ≤ r} |f(z)|`.
    pub fn sup_norm(&self, r: &Rational, tol: f64) -> Result<Enclosure> {
        let rf = num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::INFINITY);
        if rf > self.radius {
            return Err(Error::RadiusExceeded { r: rf, validity: self.radius });
        }
        let s = sup_norm_at_radius(&self.poly, &ComplexBall::zero(self.poly.prec()), r, tol)?;
        Ok(Enclosure::new((s.lo - self.tail).max(0.0), s.hi + self.tail))
    }
}
