//! Complex midpoint-radius enclosures over [`Dyadic`] numbers.
//!
//! A ball `(re + i·im, rad)` stands for the closed disk of radius `rad`
//! around the midpoint. Every operation returns a ball that contains the
//! exact result whenever the operands contain their exact values.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Rounding};
use super::fastball::F64Ball;
use crate::error::{Error, Result};

/// Mantissa bits kept for radii; radii are always rounded upward.
const RAD_BITS: u32 = 30;

pub const DEFAULT_PREC: u32 = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBall {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    prec: u32,
}

fn rad_up(x: Dyadic) -> Dyadic {
    x.round(RAD_BITS, Rounding::Ceil)
}

impl ComplexBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        ComplexBall { re, im, rad: rad_up(rad), prec }
    }

    pub fn exact(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        ComplexBall { re, im, rad: Dyadic::zero(), prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Dyadic::zero(), Dyadic::zero(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::exact(Dyadic::from_int(n.clone()), Dyadic::zero(), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::exact(Dyadic::from_i64(n), Dyadic::zero(), prec)
    }

    pub fn from_f64(re: f64, im: f64, rad: f64, prec: u32) -> Self {
        Self::new(Dyadic::from_f64(re), Dyadic::from_f64(im), Dyadic::from_f64(rad), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let (mid, err) = Dyadic::from_rational(q, prec);
        Self::new(mid, Dyadic::zero(), err, prec)
    }

    pub fn from_complex_rational(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        let (r, e1) = Dyadic::from_rational(re, prec);
        let (i, e2) = Dyadic::from_rational(im, prec);
        Self::new(r, i, &e1 + &e2, prec)
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexBall { prec, ..self.clone() }
    }

    /// Same midpoint with the radius enlarged by `extra`.
    pub fn inflate(&self, extra: &Dyadic) -> Self {
        ComplexBall { rad: rad_up(&self.rad + extra), ..self.clone() }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn finish(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (re, e1) = re.round_with_error(prec);
        let (im, e2) = im.round_with_error(prec);
        let rad = &(&rad + &e1) + &e2;
        ComplexBall { re, im, rad: rad_up(rad), prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::finish(&self.re + &other.re, &self.im + &other.im, &self.rad + &other.rad, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::finish(&self.re - &other.re, &self.im - &other.im, &self.rad + &other.rad, prec)
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        let re = &(&self.re * &other.re) - &(&self.im * &other.im);
        let im = &(&self.re * &other.im) + &(&self.im * &other.re);
        let mut rad = Dyadic::zero();
        if !other.rad.is_zero() {
            rad = &rad + &(&self.mid_abs_upper() * &other.rad);
        }
        if !self.rad.is_zero() {
            rad = &rad + &(&other.mid_abs_upper() * &self.rad);
            rad = &rad + &(&self.rad * &other.rad);
        }
        Self::finish(re, im, rad, prec)
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let d = Dyadic::from_int(n.clone());
        let rad = &self.rad * &d.abs();
        Self::finish(&self.re * &d, &self.im * &d, rad, self.prec)
    }

    pub fn mul_dyadic(&self, d: &Dyadic) -> Self {
        let rad = &self.rad * &d.abs();
        Self::finish(&self.re * d, &self.im * d, rad, self.prec)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = ComplexBall::from_i64(1, self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// `1/self`, or `None` when the ball touches zero.
    pub fn inv(&self) -> Option<Self> {
        let lo = self.mid_abs_lower();
        if lo <= self.rad {
            return None;
        }
        let prec = self.prec;
        let n2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        let (qr, er) = Dyadic::div(&self.re, &n2, prec + 8);
        let (qi, ei) = Dyadic::div(&-&self.im, &n2, prec + 8);
        // |1/(m+e) - 1/m| <= r / (|m| (|m| - r))
        let gap = &lo - &self.rad;
        let den = &lo * &gap;
        let (q, qe) = Dyadic::div(&self.rad, &den, 40);
        let prop = rad_up(&q.abs() + &qe);
        let rad = &(&prop + &er) + &ei;
        Some(Self::finish(qr, qi, rad, prec))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.mul(&inv))
    }

    /// Upper bound of `|mid|`.
    pub fn mid_abs_upper(&self) -> Dyadic {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        let n2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        rad_up(n2.sqrt_ceil(RAD_BITS + 8))
    }

    /// Lower bound of `|mid|`.
    pub fn mid_abs_lower(&self) -> Dyadic {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        let n2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        n2.sqrt_floor(self.prec.max(64)).round(self.prec.max(64), Rounding::Floor)
    }

    /// Upper bound of `|z|` over the ball, at the working precision.
    pub fn abs_upper(&self) -> Dyadic {
        let p = self.prec.max(64);
        let m = if self.im.is_zero() {
            self.re.abs()
        } else if self.re.is_zero() {
            self.im.abs()
        } else {
            let n2 = &(&self.re * &self.re) + &(&self.im * &self.im);
            n2.sqrt_ceil(p)
        };
        (&m + &self.rad).round(p, Rounding::Ceil)
    }

    /// Lower bound of `|z|` over the ball, zero if the ball touches zero.
    pub fn abs_lower(&self) -> Dyadic {
        let m = self.mid_abs_lower();
        if m <= self.rad {
            Dyadic::zero()
        } else {
            (&m - &self.rad).round(self.prec.max(64), Rounding::Floor)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_abs_lower() <= self.rad
    }

    /// Whether the exact point `re + i·im` lies in the ball.
    pub fn contains_point(&self, re: &BigRational, im: &BigRational) -> bool {
        let dr = re - self.re.to_rational();
        let di = im - self.im.to_rational();
        let r = self.rad.to_rational();
        &dr * &dr + &di * &di <= &r * &r
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.contains_point(q, &BigRational::from_integer(0.into()))
    }

    /// Disks intersect (conservative: true when unsure).
    pub fn overlaps(&self, other: &Self) -> bool {
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let d2 = &(&dr * &dr) + &(&di * &di);
        let r = &self.rad + &other.rad;
        d2 <= &r * &r
    }

    /// `other` lies inside `self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        if other.rad > self.rad {
            return false;
        }
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let d2 = &(&dr * &dr) + &(&di * &di);
        let slack = &self.rad - &other.rad;
        d2 <= &slack * &slack
    }

    /// Sound conversion to the fast `f64` ball.
    pub fn to_f64_ball(&self) -> F64Ball {
        let (rlo, rhi) = self.re.to_f64_bounds();
        let (ilo, ihi) = self.im.to_f64_bounds();
        let re = rlo + (rhi - rlo) / 2.0;
        let im = ilo + (ihi - ilo) / 2.0;
        let (_, rad) = self.rad.to_f64_bounds();
        let extra = (rhi - rlo) + (ihi - ilo);
        F64Ball::new(re, im, rad + extra)
    }

    /// Midpoint as `f64` pair (approximate).
    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64_bounds().1
    }

    /// Enclosure of `ln |z|`; fails when the ball touches zero.
    pub fn ln_abs(&self) -> Result<super::enclosure::Enclosure> {
        let lo = self.abs_lower();
        if lo.is_zero() {
            return Err(Error::PossiblyZero);
        }
        let hi = self.abs_upper();
        let (a, _) = lo.ln_bounds();
        let (_, b) = hi.ln_bounds();
        Ok(super::enclosure::Enclosure::new(a, b))
    }

    /// Real-part interval as dyadic bounds.
    pub fn re_bounds(&self) -> (Dyadic, Dyadic) {
        (&self.re - &self.rad, &self.re + &self.rad)
    }
}

/// Serialized form `{"re": str, "im": str, "rad": str}` with exact dyadic strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BallRepr {
    pub re: String,
    pub im: String,
    pub rad: String,
}

impl From<&ComplexBall> for BallRepr {
    fn from(b: &ComplexBall) -> Self {
        BallRepr { re: b.re.to_string(), im: b.im.to_string(), rad: b.rad.to_string() }
    }
}

impl BallRepr {
    pub fn to_ball(&self, prec: u32) -> Result<ComplexBall> {
        Ok(ComplexBall::new(self.re.parse()?, self.im.parse()?, self.rad.parse()?, prec))
    }
}

impl Serialize for ComplexBall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BallRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexBall {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BallRepr::deserialize(d)?;
        r.to_ball(DEFAULT_PREC).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn rational_ball_contains_value() {
        let b = ComplexBall::from_rational(&q(1, 3), 64);
        assert!(b.contains_rational(&q(1, 3)));
        assert!(!b.contains_rational(&q(1, 2)));
    }

    #[test]
    fn multiplication_encloses_product() {
        let a = ComplexBall::from_complex_rational(&q(1, 3), &q(2, 7), 53);
        let b = ComplexBall::from_complex_rational(&q(-5, 11), &q(1, 9), 53);
        let p = a.mul(&b);
        let re = q(1, 3) * q(-5, 11) - q(2, 7) * q(1, 9);
        let im = q(1, 3) * q(1, 9) + q(2, 7) * q(-5, 11);
        assert!(p.contains_point(&re, &im));
    }

    #[test]
    fn inverse_encloses_reciprocal() {
        let a = ComplexBall::from_complex_rational(&q(3, 5), &q(-4, 7), 80);
        let inv = a.inv().unwrap();
        let n = q(3, 5) * q(3, 5) + q(4, 7) * q(4, 7);
        assert!(inv.contains_point(&(q(3, 5) / &n), &(q(4, 7) / &n)));
        let z = ComplexBall::from_f64(0.0, 0.0, 0.1, 53);
        assert!(z.inv().is_none());
    }

    #[test]
    fn identity_ball_is_preserved() {
        let z = ComplexBall::from_f64(0.0, 0.0, 0.5, 53);
        let w = z.mul(&ComplexBall::from_i64(1, 53));
        assert_eq!(w.rad_f64(), 0.5);
        assert!(w.re().is_zero());
    }

    #[test]
    fn serde_round_trip() {
        let b = ComplexBall::from_rational(&q(22, 7), 64);
        let s = serde_json::to_string(&b).unwrap();
        let back: ComplexBall = serde_json::from_str(&s).unwrap();
        assert_eq!(back.re(), b.re());
        assert_eq!(back.rad(), b.rad());
    }
}
