//! Complex balls with `f64` midpoint and radius.
//!
//! Used on hot paths (Monte-Carlo sampling, boundary scans). Each
//! operation adds a bound on its own IEEE round-to-nearest error to the
//! radius, so enclosures stay sound; callers escalate to
//! [`ComplexBall`](super::ball::ComplexBall) when the radius is too wide.

const U: f64 = f64::EPSILON * 0.5;
const TINY: f64 = 1e-300;

#[inline]
fn up(x: f64) -> f64 {
    x * (1.0 + 4.0 * U) + TINY
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F64Ball {
    pub re: f64,
    pub im: f64,
    pub rad: f64,
}

impl F64Ball {
    pub fn new(re: f64, im: f64, rad: f64) -> Self {
        debug_assert!(rad >= 0.0);
        F64Ball { re, im, rad }
    }

    pub fn exact(re: f64, im: f64) -> Self {
        F64Ball { re, im, rad: 0.0 }
    }

    pub fn real(x: f64) -> Self {
        F64Ball { re: x, im: 0.0, rad: 0.0 }
    }

    pub fn zero() -> Self {
        F64Ball::exact(0.0, 0.0)
    }

    #[inline]
    pub fn mid_abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn abs_upper(&self) -> f64 {
        up(self.mid_abs() * (1.0 + 2.0 * U) + self.rad)
    }

    #[inline]
    pub fn abs_lower(&self) -> f64 {
        let m = self.mid_abs() * (1.0 - 4.0 * U);
        let lo = (m - self.rad) * (1.0 - 2.0 * U);
        if lo > 0.0 {
            lo
        } else {
            0.0
        }
    }

    #[inline]
    pub fn add(&self, o: &F64Ball) -> F64Ball {
        let re = self.re + o.re;
        let im = self.im + o.im;
        let err = U * (re.abs() + im.abs());
        F64Ball { re, im, rad: up(self.rad + o.rad + err) }
    }

    #[inline]
    pub fn sub(&self, o: &F64Ball) -> F64Ball {
        self.add(&F64Ball { re: -o.re, im: -o.im, rad: o.rad })
    }

    #[inline]
    pub fn mul(&self, o: &F64Ball) -> F64Ball {
        let a = self.re * o.re;
        let b = self.im * o.im;
        let c = self.re * o.im;
        let d = self.im * o.re;
        let re = a - b;
        let im = c + d;
        let err = 3.0 * U * (a.abs() + b.abs() + c.abs() + d.abs());
        let prop = self.mid_abs() * o.rad + o.mid_abs() * self.rad + self.rad * o.rad;
        F64Ball { re, im, rad: up(up(prop) + err) }
    }

    #[inline]
    pub fn scale(&self, k: f64) -> F64Ball {
        let re = self.re * k;
        let im = self.im * k;
        let err = U * (re.abs() + im.abs());
        F64Ball { re, im, rad: up(self.rad * k.abs() + err) }
    }

    /// `self * z + c` with `c` real.
    #[inline]
    pub fn mul_add_real(&self, z: &F64Ball, c: f64) -> F64Ball {
        self.mul(z).add(&F64Ball::real(c))
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower() == 0.0
    }
}

/// Horner evaluation of a real-coefficient polynomial (ascending order).
pub fn horner_real(coeffs: &[f64], z: &F64Ball) -> F64Ball {
    let mut acc = F64Ball::zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul_add_real(z, c);
    }
    acc
}

/// Horner evaluation with ball coefficients (ascending order).
pub fn horner_ball(coeffs: &[F64Ball], z: &F64Ball) -> F64Ball {
    let mut acc = F64Ball::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dyadic::Dyadic;
    use num_rational::BigRational;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn horner_encloses_exact_rational_value(
            coeffs in prop::collection::vec(-50i64..50, 1..9),
            re in -2000i64..2000, im in -2000i64..2000,
        ) {
            let zr = re as f64 / 1024.0;
            let zi = im as f64 / 1024.0;
            let fc: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
            let v = horner_real(&fc, &F64Ball::exact(zr, zi));
            // exact evaluation over Q(i)
            let qr = Dyadic::from_f64(zr).to_rational();
            let qi = Dyadic::from_f64(zi).to_rational();
            let mut ar = BigRational::from_integer(0.into());
            let mut ai = BigRational::from_integer(0.into());
            for &c in coeffs.iter().rev() {
                let nr = &ar * &qr - &ai * &qi + BigRational::from_integer(c.into());
                let ni = &ar * &qi + &ai * &qr;
                ar = nr;
                ai = ni;
            }
            let dr = ar - Dyadic::from_f64(v.re).to_rational();
            let di = ai - Dyadic::from_f64(v.im).to_rational();
            let r = Dyadic::from_f64(v.rad).to_rational();
            prop_assert!(&dr * &dr + &di * &di <= &r * &r);
        }
    }
}
