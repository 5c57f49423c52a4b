//! Exact Haar measure of p-adic sublevel sets on `Z_p`.
//!
//! A residue class `a + p^j Z_p` is examined through `Q(t) = P(a + p^j t)`.
//! With `γ = min v(q_i)` every value on the class has valuation `≥ γ`, and
//! when `v(q_0) < v(q_i)` for all `i ≥ 1` the valuation is constant `v(q_0)`.
//! Classes neither wholly inside nor wholly outside are split into `p`
//! children.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::arith::padic::{int_valuation, is_prime};
use crate::arith::rational::{serde_rational, Rational};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

pub const DEFAULT_RESOLUTION_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadicMeasure {
    pub p: u64,
    pub m: u32,
    /// Resolution exponent: `value = count / p^k`.
    pub k: u32,
    pub count: String,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub degree: u32,
    /// `−log_p ‖P‖₁` where `‖P‖₁ = sup_{Z_p} |P|_p`.
    pub sup_valuation: u32,
    /// `ε^{1/d}` with `ε = p^{−m}`, `r = 1`.
    pub paper_bound: f64,
    /// `(d + 1)·ε^{1/d}`.
    pub corrected_bound: f64,
    pub paper_bound_exceeded: bool,
    pub corrected_bound_holds: bool,
}

/// Coefficients of `P(a + s·t)` in `t`.
fn shifted(c: &[BigInt], a: &BigInt, s: &BigInt) -> Vec<BigInt> {
    // Taylor shift by repeated synthetic division, then scale t ↦ s·t
    let mut q = c.to_vec();
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &q[j + 1] * a;
            q[j] += t;
        }
    }
    let mut sk = BigInt::one();
    for x in q.iter_mut() {
        *x *= &sk;
        sk *= s;
    }
    q
}

fn val(x: &BigInt, p: u64) -> u32 {
    int_valuation(x, p).unwrap_or(u32::MAX)
}

struct Class {
    gamma: u32,
    constant: bool,
    q: Vec<BigInt>,
}

fn examine(c: &[BigInt], a: &BigInt, pj: &BigInt, p: u64) -> Class {
    let q = shifted(c, a, pj);
    let v: Vec<u32> = q.iter().map(|x| val(x, p)).collect();
    let rest = v[1..].iter().copied().min().unwrap_or(u32::MAX);
    Class { gamma: v[0].min(rest), constant: v[0] < rest, q }
}

/// Whether `Q/p^γ` is a nonzero function on `F_p`.
fn attains(q: &[BigInt], gamma: u32, p: u64) -> bool {
    let pb = BigInt::from(p);
    let pg = pb.clone().pow(gamma);
    let red: Vec<u64> = q
        .iter()
        .map(|x| {
            let y = (x / &pg) % &pb;
            let y = if y < BigInt::zero() { y + &pb } else { y };
            u64::try_from(y).unwrap()
        })
        .collect();
    (0..p).any(|t| {
        let mut acc: u128 = 0;
        for &c in red.iter().rev() {
            acc = (acc * t as u128 + c as u128) % p as u128;
        }
        acc != 0
    })
}

/// `min_{z ∈ Z_p} v(P(z))`.
fn sup_valuation(c: &[BigInt], p: u64, cap: u32) -> Result<u32> {
    let pb = BigInt::from(p);
    let mut best = u32::MAX;
    let mut stack = vec![(BigInt::zero(), 0u32)];
    while let Some((a, j)) = stack.pop() {
        let pj = pb.clone().pow(j);
        let cl = examine(c, &a, &pj, p);
        if cl.gamma >= best {
            continue;
        }
        if cl.constant || attains(&cl.q, cl.gamma, p) {
            best = cl.gamma;
            continue;
        }
        if j >= cap {
            return Err(Error::ResolutionCapExceeded { cap });
        }
        for t in 0..p {
            stack.push((&a + &pj * t, j + 1));
        }
    }
    Ok(best)
}

pub fn padic_small_value_measure(p_poly: &IntPolynomial, p: u64, m: u32, k: u32) -> Result<PadicMeasure> {
    padic_small_value_measure_with(p_poly, p, m, k, DEFAULT_RESOLUTION_CAP.max(k))
}

/// Exact `μ{z ∈ Z_p : |P(z)|_p ≤ p^{−m}‖P‖₁}`, reported at resolution
/// `max(k, depth needed)`.
pub fn padic_small_value_measure_with(p_poly: &IntPolynomial, p: u64, m: u32, k: u32, cap: u32) -> Result<PadicMeasure> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let c = p_poly.to_univariate().ok_or(Error::ArityMismatch { expected: 1, got: p_poly.arity() })?;
    if p_poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = p_poly.degree().unwrap_or(0);
    let vsup = sup_valuation(&c, p, cap)?;
    let target = vsup + m;
    let pb = BigInt::from(p);
    let mut qualifying: Vec<u32> = vec![];
    let mut stack = vec![(BigInt::zero(), 0u32)];
    while let Some((a, j)) = stack.pop() {
        let pj = pb.clone().pow(j);
        let cl = examine(&c, &a, &pj, p);
        if cl.gamma >= target {
            qualifying.push(j);
            continue;
        }
        if cl.constant {
            continue;
        }
        if j >= cap {
            return Err(Error::ResolutionCapExceeded { cap });
        }
        for t in 0..p {
            stack.push((&a + &pj * t, j + 1));
        }
    }
    let depth = qualifying.iter().copied().max().unwrap_or(0).max(k);
    let mut count = BigInt::zero();
    for j in qualifying {
        count += pb.clone().pow(depth - j);
    }
    let value = Rational::new(count.clone(), pb.clone().pow(depth));
    let eps_root = (p as f64).powf(-(m as f64) / d.max(1) as f64);
    let vf = num_traits::ToPrimitive::to_f64(&value).unwrap();
    let paper_bound = eps_root;
    let corrected_bound = (d as f64 + 1.0) * eps_root;
    Ok(PadicMeasure {
        p,
        m,
        k: depth,
        count: count.to_string(),
        value,
        degree: d,
        sup_valuation: vsup,
        paper_bound,
        corrected_bound,
        paper_bound_exceeded: vf > paper_bound * (1.0 + 1e-12),
        corrected_bound_holds: vf <= corrected_bound * (1.0 + 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn poly(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    #[test]
    fn examples() {
        let a = padic_small_value_measure(&poly("z"), 2, 3, 1).unwrap();
        assert_eq!(a.value, rat(1, 8));
        assert!(!a.paper_bound_exceeded);
        let b = padic_small_value_measure(&poly("z^2 - 1"), 3, 1, 1).unwrap();
        assert_eq!(b.value, rat(2, 3));
        assert!(b.paper_bound_exceeded && b.corrected_bound_holds);
        let c = padic_small_value_measure(&poly("z^2 + 1"), 3, 1, 1).unwrap();
        assert_eq!(c.value, rat(0, 1));
    }

    #[test]
    fn sup_norm_below_gauss_norm() {
        // z^2 − z is even on Z_2, so ‖P‖₁ = 1/2
        let a = padic_small_value_measure(&poly("z^2 - z"), 2, 1, 1).unwrap();
        assert_eq!(a.sup_valuation, 1);
        // v(z(z−1)) ≥ 2 iff z ≡ 0 or 1 mod 4
        assert_eq!(a.value, rat(1, 2));
    }

    #[test]
    fn resolution_is_stable() {
        let p = poly("3*z^3 - 5*z + 7");
        let base = padic_small_value_measure(&p, 5, 2, 1).unwrap();
        for k in [base.k + 1, base.k + 2, base.k + 5] {
            let r = padic_small_value_measure(&p, 5, 2, k).unwrap();
            assert_eq!((r.value.clone(), r.k), (base.value.clone(), k));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(padic_small_value_measure(&poly("z"), 4, 1, 1).is_err());
        assert!(padic_small_value_measure(&poly("z"), 2, 0, 1).is_err());
        let e = padic_small_value_measure_with(&poly("z"), 2, 10, 1, 4);
        assert!(matches!(e, Err(Error::ResolutionCapExceeded { cap: 4 })));
    }
}
