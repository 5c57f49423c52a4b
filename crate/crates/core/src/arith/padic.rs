//! p-adic valuations and absolute values on rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{serde_rational, Rational};
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest `v` with `p^v | n`; `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(x: &Rational, p: u64) -> Option<i64> {
    let vn = int_valuation(x.numer(), p)? as i64;
    let vd = int_valuation(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// `p^(-v)` as an exact rational.
pub fn p_power(p: u64, v: i64) -> Rational {
    let pp = BigInt::from(p).pow(v.unsigned_abs() as u32);
    if v <= 0 {
        Rational::from_integer(pp)
    } else {
        Rational::new(BigInt::one(), pp)
    }
}

/// A rational viewed in Q_p, known modulo `p^precision` unless exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadicScalar {
    pub p: u64,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub precision: u32,
    /// The value is known exactly (not only modulo `p^precision`).
    pub exact: bool,
}

impl PadicScalar {
    pub fn new(p: u64, value: Rational, precision: u32, exact: bool) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidParameter("precision must be at least 1".into()));
        }
        Ok(PadicScalar { p, value, precision, exact })
    }

    pub fn exact(p: u64, value: Rational) -> Result<Self> {
        Self::new(p, value, 64, true)
    }
}

/// `|x|_p = p^(-v_p(x))`, with `|0|_p = 0`.
pub fn padic_abs(x: &PadicScalar) -> Result<Rational> {
    match valuation(&x.value, x.p) {
        None if x.exact => Ok(Rational::zero()),
        None => Err(Error::PrecisionExhausted { bits: x.precision }),
        Some(v) if !x.exact && v >= x.precision as i64 => {
            Err(Error::PrecisionExhausted { bits: x.precision })
        }
        Some(v) => Ok(p_power(x.p, v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn abs_examples() {
        assert_eq!(padic_abs(&PadicScalar::exact(2, int(8)).unwrap()).unwrap(), rat(1, 8));
        assert_eq!(padic_abs(&PadicScalar::exact(2, rat(3, 4)).unwrap()).unwrap(), int(4));
        assert_eq!(padic_abs(&PadicScalar::exact(5, int(0)).unwrap()).unwrap(), int(0));
    }

    #[test]
    fn inexact_zero_mod_pk_is_exhausted() {
        let x = PadicScalar::new(3, int(27), 3, false).unwrap();
        assert!(matches!(padic_abs(&x), Err(Error::PrecisionExhausted { .. })));
        let y = PadicScalar::new(3, int(9), 3, false).unwrap();
        assert_eq!(padic_abs(&y).unwrap(), rat(1, 9));
        assert!(PadicScalar::new(4, int(1), 3, true).is_err());
    }

    proptest! {
        #[test]
        fn abs_is_multiplicative(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500,
                                 pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let x = rat(a, b);
            let y = rat(c, d);
            let ax = padic_abs(&PadicScalar::exact(p, x.clone()).unwrap()).unwrap();
            let ay = padic_abs(&PadicScalar::exact(p, y.clone()).unwrap()).unwrap();
            let axy = padic_abs(&PadicScalar::exact(p, x * y).unwrap()).unwrap();
            prop_assert_eq!(axy, ax * ay);
        }
    }
}
