//! Exact vanishing of integer polynomials at algebraic points.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::algebraic::{compositum, AlgebraicNumber, Precision, DEFAULT_DEGREE_CAP};
use super::ball::ComplexBall;
use super::dyadic::Dyadic;
use super::rational::Rational;
use super::upoly;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Enclosure of `P(z)`.
pub fn eval_poly_ball(p: &IntPolynomial, z: &[ComplexBall]) -> Result<ComplexBall> {
    p.eval_ball(z)
}

pub fn is_exact_zero(p: &IntPolynomial, point: &[AlgebraicNumber]) -> Result<bool> {
    is_exact_zero_with(p, point, Precision::from_env(), DEFAULT_DEGREE_CAP)
}

pub fn is_exact_zero_with(p: &IntPolynomial, point: &[AlgebraicNumber], prec: Precision, cap: usize) -> Result<bool> {
    if point.len() != p.arity() {
        return Err(Error::ArityMismatch { expected: p.arity(), got: point.len() });
    }
    if p.is_zero() {
        return Ok(true);
    }
    if p.degree() == Some(0) {
        return Ok(false);
    }
    let irrational: Vec<usize> = (0..point.len()).filter(|&i| point[i].degree() > 1).collect();
    match irrational.len() {
        0 => {
            let qs: Vec<Rational> = point.iter().map(|a| a.as_rational().unwrap()).collect();
            Ok(p.eval_rational(&qs)?.is_zero())
        }
        1 => Ok(vanishes_at_simple_point(p, point, irrational[0])),
        _ => vanishes_by_norm(p, point, &irrational, prec, cap),
    }
}

/// One irrational coordinate `α`: substitute the rationals and test
/// whether the minimal polynomial of `α` divides the result over Q.
fn vanishes_at_simple_point(p: &IntPolynomial, point: &[AlgebraicNumber], i: usize) -> bool {
    let d = p.degree_in(i).unwrap_or(0) as usize;
    let mut q = vec![Rational::zero(); d + 1];
    for (e, c) in p.terms() {
        let mut t = Rational::from_integer(c.clone());
        for (j, &k) in e.iter().enumerate() {
            if j != i && k > 0 {
                t *= num_traits::pow::pow(point[j].as_rational().unwrap(), k as usize);
            }
        }
        q[e[i] as usize] += t;
    }
    let f: Vec<Rational> = point[i].minpoly().iter().map(|c| Rational::from_integer(c.clone())).collect();
    upoly::divides_q(&f, &q)
}

/// Several irrational coordinates: `w = P(α)·Π a_i^{deg_i P}` is an
/// algebraic integer, so `w = 0` exactly when `|N(w)| < 1`.
fn vanishes_by_norm(
    p: &IntPolynomial,
    point: &[AlgebraicNumber],
    irrational: &[usize],
    prec: Precision,
    cap: usize,
) -> Result<bool> {
    let nums: Vec<AlgebraicNumber> = irrational.iter().map(|&i| point[i].clone()).collect();
    let mut scale = BigInt::one();
    for (j, a) in point.iter().enumerate() {
        let k = p.degree_in(j).unwrap_or(0);
        let den = match a.as_rational() {
            Some(q) => q.denom().clone(),
            None => a.leading_coefficient().clone(),
        };
        scale *= den.pow(k);
    }
    for bits in prec.schedule() {
        let c = compositum(&nums, Precision { start: bits, ceiling: prec.ceiling.max(bits) }, cap)?;
        let mut vals = Vec::with_capacity(c.degree);
        for emb in &c.embeddings {
            let mut z = Vec::with_capacity(point.len());
            let mut next = 0;
            for a in point {
                match a.as_rational() {
                    Some(q) => z.push(ComplexBall::from_rational(&q, bits)),
                    None => {
                        z.push(emb[next].clone());
                        next += 1;
                    }
                }
            }
            vals.push(p.eval_ball(&z)?.mul_int(&scale));
        }
        if !vals[0].contains_zero() {
            return Ok(false);
        }
        // |σ_0 w| · Π_{k≠0} |σ_k w| < 1 forces N(w) = 0
        let mut prod = vals[0].abs_upper();
        for v in &vals[1..] {
            prod = (&prod * &v.abs_upper()).round(64, super::dyadic::Rounding::Ceil);
        }
        if prod < Dyadic::one() {
            return Ok(true);
        }
    }
    Err(Error::PrecisionExhausted { bits: prec.ceiling })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn sqrt(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::real_root(&int(n), 2).unwrap()
    }

    #[test]
    fn examples() {
        let p = IntPolynomial::parse("z^2 - 2").unwrap();
        assert!(is_exact_zero(&p, &[sqrt(2)]).unwrap());
        assert!(!is_exact_zero(&p, &[sqrt(3)]).unwrap());
        let one = IntPolynomial::parse("1").unwrap();
        assert!(!is_exact_zero(&one, &[sqrt(3)]).unwrap());
    }

    #[test]
    fn several_coordinates() {
        // √2·√3 − √6 = 0 while √2 + √3 − √6 ≠ 0
        let s6 = sqrt(6);
        let p = IntPolynomial::parse("z1*z2 - z3").unwrap();
        assert!(is_exact_zero(&p, &[sqrt(2), sqrt(3), s6]).unwrap());
        let q = IntPolynomial::parse("z1^2 + z2^2 - 5").unwrap();
        assert!(is_exact_zero(&q, &[sqrt(2), sqrt(3)]).unwrap());
        let r = IntPolynomial::parse("z1 + z2 - 3").unwrap();
        assert!(!is_exact_zero(&r, &[sqrt(2), sqrt(3)]).unwrap());
        // ζ3 + ζ3² + 1 = 0
        let z1 = AlgebraicNumber::root_of_unity(3, 1);
        let z2 = AlgebraicNumber::root_of_unity(3, 2);
        let s = IntPolynomial::parse("z1 + z2 + 1").unwrap();
        assert!(is_exact_zero(&s, &[z1.clone(), z2.clone()]).unwrap());
        // non-integral coordinates: √2/2 · √2 − 1 = 0
        let h = AlgebraicNumber::new(upoly::from_i64(&[-1, 0, 2]), Complex64::new(0.7, 0.0)).unwrap();
        let t = IntPolynomial::parse("z1*z2 - 1").unwrap();
        assert!(is_exact_zero(&t, &[h, sqrt(2)]).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn agrees_with_rational_evaluation(a in -6i64..6, b in 1i64..6, c in -6i64..6, d in 1i64..6,
                                           k0 in -3i64..3, k1 in -3i64..3, k2 in -3i64..3, k3 in -3i64..3) {
            let p = IntPolynomial::new(2, [
                (vec![0, 0], BigInt::from(k0)), (vec![1, 0], BigInt::from(k1)),
                (vec![0, 1], BigInt::from(k2)), (vec![1, 1], BigInt::from(k3)),
            ]);
            let x = rat(a, b);
            let y = rat(c, d);
            let exact = p.eval_rational(&[x.clone(), y.clone()]).unwrap().is_zero();
            let pts = [AlgebraicNumber::from_rational(&x), AlgebraicNumber::from_rational(&y)];
            prop_assert_eq!(is_exact_zero(&p, &pts).unwrap(), exact);
        }
    }
}
