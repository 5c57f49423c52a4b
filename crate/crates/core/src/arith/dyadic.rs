//! Arbitrary-size binary floating values `mantissa · 2^exponent`.
//!
//! Addition, subtraction and multiplication are exact; rounding to a
//! precision happens only when requested, with an explicit direction, so
//! ball arithmetic on top of this type can account for every error.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rounding direction for [`Dyadic::round`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
    Nearest,
}

/// Exact value `man · 2^exp`; the mantissa is odd unless the value is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64 has no dyadic value");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Number of mantissa bits.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + e }
    }

    /// Rounds to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u32, mode: Rounding) -> Self {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // arithmetic shift floors toward negative infinity
        let floor = &self.man >> shift;
        let q = match mode {
            Rounding::Floor => floor,
            Rounding::Ceil => floor + 1,
            Rounding::Nearest => {
                let half_bit = (&self.man >> (shift - 1)) & BigInt::one();
                if half_bit.is_one() {
                    floor + 1
                } else {
                    floor
                }
            }
        };
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// Nearest rounding together with the exact absolute rounding error.
    pub fn round_with_error(&self, prec: u32) -> (Self, Self) {
        let r = self.round(prec, Rounding::Nearest);
        let err = (self - &r).abs();
        (r, err)
    }

    /// Truncated quotient with at least `prec` significant bits and a bound
    /// on the absolute error `|a/b - q|`.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u32) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero dyadic");
        if a.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let shift = (prec as i64 + b.man.bits() as i64 - a.man.bits() as i64 + 2).max(0);
        let num = &a.man << shift as u64;
        let q = &num / &b.man;
        let e = a.exp - b.exp - shift;
        (Dyadic::new(q, e), Dyadic::pow2(e))
    }

    /// Upper bound on `sqrt(x)` for `x ≥ 0`, with about `prec` bits.
    pub fn sqrt_ceil(&self, prec: u32) -> Self {
        self.sqrt_rounded(prec, true)
    }

    /// Lower bound on `sqrt(x)` for `x ≥ 0`, with about `prec` bits.
    pub fn sqrt_floor(&self, prec: u32) -> Self {
        self.sqrt_rounded(prec, false)
    }

    fn sqrt_rounded(&self, prec: u32, up: bool) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as i64 + 4;
        let mut shift = (want - self.man.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.man << shift as u64;
        let e = self.exp - shift;
        let mut s = m.sqrt();
        if up && &s * &s != m {
            s += 1;
        }
        Dyadic::new(s, e / 2)
    }

    /// Rounded to the nearest `f64` (approximately; not a bound).
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.to_f64_bounds();
        if lo == hi {
            return lo;
        }
        if lo.is_infinite() {
            return hi;
        }
        if hi.is_infinite() {
            return lo;
        }
        lo + (hi - lo) / 2.0
    }

    /// `lo ≤ x ≤ hi` in `f64`, saturating outside the normal range.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        if self.is_zero() {
            return (0.0, 0.0);
        }
        if self.is_negative() {
            let (lo, hi) = self.abs().to_f64_bounds();
            return (-hi, -lo);
        }
        let msb = self.msb().unwrap();
        if msb > 1000 {
            return (f64::MAX, f64::INFINITY);
        }
        if msb < -1000 {
            return (0.0, ldexp(1.0, -1000));
        }
        let lo = self.round(53, Rounding::Floor);
        let hi = self.round(53, Rounding::Ceil);
        (lo.exact_f64(), hi.exact_f64())
    }

    // caller guarantees at most 53 mantissa bits in the normal range
    fn exact_f64(&self) -> f64 {
        let m = self.man.to_f64().expect("mantissa fits");
        ldexp(m, self.exp)
    }

    /// Enclosure `[lo, hi]` of `ln x` for `x > 0`.
    pub fn ln_bounds(&self) -> (f64, f64) {
        assert!(self.signum() > 0, "ln of nonpositive dyadic");
        let msb = self.msb().unwrap();
        let frac = self.mul_pow2(-msb);
        let (flo, fhi) = frac.to_f64_bounds();
        let shift = msb as f64 * std::f64::consts::LN_2;
        let lo = flo.ln() + shift;
        let hi = fhi.ln() + shift;
        let slack = 4e-16 * (1.0 + lo.abs().max(hi.abs())) + (msb.unsigned_abs() as f64) * 2e-16;
        (lo - slack, hi + slack)
    }

    pub fn to_rational(&self) -> num_rational::BigRational {
        use num_rational::BigRational;
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Rational rounded to `prec` bits, with an absolute error bound.
    pub fn from_rational(q: &num_rational::BigRational, prec: u32) -> (Self, Self) {
        let num = Dyadic::from_int(q.numer().clone());
        let den = Dyadic::from_int(q.denom().clone());
        if q.denom().is_one() {
            return (num, Dyadic::zero());
        }
        Dyadic::div(&num, &den, prec)
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

/// `m · 2^e` in `f64`, exact whenever the result is a normal number.
pub fn ldexp(m: f64, e: i64) -> f64 {
    let mut x = m;
    let mut e = e;
    while e > 0 {
        let step = e.min(1000);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        x /= 2f64.powi(step as i32);
        e += step;
    }
    x
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &rhs.man << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: &self.man * &rhs.man, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -self.man, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Exact text form `<mantissa>p<exponent>`, e.g. `181p-7`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.man)
        } else {
            write!(f, "{}p{}", self.man, self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (m, e) = match s.split_once('p') {
            Some((m, e)) => (m, e.parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?),
            None => (s, 0),
        };
        if m.contains('.') || m.contains('e') || m.contains('E') {
            let x: f64 = s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?;
            return Ok(Dyadic::from_f64(x));
        }
        let man: BigInt = m.parse().map_err(|_| Error::Parse(format!("bad mantissa {m}")))?;
        Ok(Dyadic::new(man, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [1.0, -0.75, 3.141592653589793, 1e-300, 6.02e23] {
            let d = Dyadic::from_f64(x);
            let (lo, hi) = d.to_f64_bounds();
            assert_eq!(lo, x);
            assert_eq!(hi, x);
        }
    }

    #[test]
    fn rounding_directions_bracket_value() {
        let x = Dyadic::from_int(BigInt::from(0b1011011i64));
        let lo = x.round(3, Rounding::Floor);
        let hi = x.round(3, Rounding::Ceil);
        assert!(lo <= x && x <= hi);
        assert_eq!(lo, Dyadic::from_i64(0b1010000));
        assert_eq!(hi, Dyadic::from_i64(0b1100000));
        let neg = -x.clone();
        assert!(neg.round(3, Rounding::Floor) <= neg);
        assert!(neg.round(3, Rounding::Ceil) >= neg);
    }

    #[test]
    fn division_error_bound_holds() {
        let a = Dyadic::from_i64(1);
        let b = Dyadic::from_i64(3);
        let (q, err) = Dyadic::div(&a, &b, 64);
        let exact = num_rational::BigRational::new(1.into(), 3.into());
        let diff = (exact - q.to_rational()).abs();
        assert!(diff <= err.to_rational());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = Dyadic::from_i64(2);
        let lo = two.sqrt_floor(80);
        let hi = two.sqrt_ceil(80);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert!((&hi - &lo).msb().unwrap() < -70);
    }

    #[test]
    fn ln_bounds_enclose() {
        let x = Dyadic::from_i64(10);
        let (lo, hi) = x.ln_bounds();
        assert!(lo <= 10f64.ln() && 10f64.ln() <= hi);
        let tiny = Dyadic::pow2(-5000);
        let (lo, hi) = tiny.ln_bounds();
        let exact = -5000.0 * std::f64::consts::LN_2;
        assert!(lo <= exact && exact <= hi);
    }

    #[test]
    fn text_form_round_trips() {
        let d = Dyadic::new(BigInt::from(181), -7);
        assert_eq!(d.to_string().parse::<Dyadic>().unwrap(), d);
    }
}
