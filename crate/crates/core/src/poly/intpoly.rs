use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::ball::ComplexBall;
use crate::arith::dyadic::Dyadic;
use crate::arith::fastball::F64Ball;
use crate::arith::rational::Rational;
use crate::error::{Error, Result};

/// Multivariate polynomial with integer coefficients, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(arity: usize) -> Self {
        assert!(arity >= 1, "arity must be positive");
        IntPolynomial { arity, terms: BTreeMap::new() }
    }

    pub fn new<I: IntoIterator<Item = (Vec<u32>, BigInt)>>(arity: usize, terms: I) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent length must equal arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn constant(arity: usize, c: BigInt) -> Self {
        Self::new(arity, [(vec![0; arity], c)])
    }

    /// `z_i` (0-based index).
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::new(arity, [(e, BigInt::one())])
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn univariate(coeffs: &[BigInt]) -> Self {
        Self::new(1, coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::univariate(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// `‖P‖ = max |coefficient|` (zero for the zero polynomial).
    pub fn norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Upper bound for `log ‖P‖`.
    pub fn log_norm(&self) -> f64 {
        let n = self.norm();
        if n.is_zero() {
            return f64::NEG_INFINITY;
        }
        if n.is_one() {
            return 0.0;
        }
        Dyadic::from_int(n).ln_bounds().1
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Ascending coefficients when the arity is 1.
    pub fn to_univariate(&self) -> Option<Vec<BigInt>> {
        if self.arity != 1 {
            return None;
        }
        let d = self.degree().unwrap_or(0) as usize;
        let mut v = vec![BigInt::zero(); d + 1];
        for (e, c) in &self.terms {
            v[e[0] as usize] = c.clone();
        }
        Some(v)
    }

    /// Largest `a` with `z_1^a | P`.
    pub fn z1_valuation(&self) -> u32 {
        self.terms.keys().map(|e| e[0]).min().unwrap_or(0)
    }

    /// `P / z_1^a`; requires `a ≤ z1_valuation`.
    pub fn div_z1_pow(&self, a: u32) -> Self {
        assert!(a <= self.z1_valuation());
        IntPolynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[0] -= a;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: n });
        }
        Ok(())
    }

    /// Coefficients of `P` as a polynomial in `z_1` over the remaining variables.
    fn split_first(&self) -> Vec<Vec<(&[u32], &BigInt)>> {
        let d = self.degree_in(0).unwrap_or(0) as usize;
        let mut parts: Vec<Vec<(&[u32], &BigInt)>> = vec![vec![]; d + 1];
        for (e, c) in &self.terms {
            parts[e[0] as usize].push((&e[1..], c));
        }
        parts
    }

    pub fn eval_rational(&self, z: &[Rational]) -> Result<Rational> {
        self.check_arity(z.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (x, &k) in z.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Enclosure of `P(z)`, Horner in `z_1` with recursively evaluated coefficients.
    pub fn eval_ball(&self, z: &[ComplexBall]) -> Result<ComplexBall> {
        self.check_arity(z.len())?;
        let prec = z.iter().map(|b| b.prec()).max().unwrap_or(crate::arith::ball::DEFAULT_PREC);
        Ok(eval_terms_ball(self.terms.iter().map(|(e, c)| (e.as_slice(), c)).collect(), z, prec))
    }

    /// Fast `f64` enclosure of `P(z)`.
    pub fn eval_f64(&self, z: &[F64Ball]) -> Result<F64Ball> {
        self.check_arity(z.len())?;
        Ok(eval_terms_f64(self.terms.iter().map(|(e, c)| (e.as_slice(), c)).collect(), z))
    }

    /// Coefficients as `f64` balls in `z_1`, with the remaining variables substituted.
    pub fn coefficient_balls(&self, tail: &[ComplexBall], prec: u32) -> Vec<ComplexBall> {
        self.split_first()
            .into_iter()
            .map(|part| eval_terms_ball(part, tail, prec))
            .collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        super::parse::parse_polynomial(s, None)
    }

    pub fn parse_with_arity(s: &str, arity: usize) -> Result<Self> {
        super::parse::parse_polynomial(s, Some(arity))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.arity, BigInt::one());
        for _ in 0..k {
            r = &r * self;
        }
        r
    }
}

fn eval_terms_ball(terms: Vec<(&[u32], &BigInt)>, z: &[ComplexBall], prec: u32) -> ComplexBall {
    if terms.is_empty() {
        return ComplexBall::zero(prec);
    }
    if z.is_empty() {
        let mut s = BigInt::zero();
        for (_, c) in terms {
            s += c;
        }
        return ComplexBall::from_int(&s, prec);
    }
    let d = terms.iter().map(|(e, _)| e[0]).max().unwrap() as usize;
    let mut parts: Vec<Vec<(&[u32], &BigInt)>> = vec![vec![]; d + 1];
    for (e, c) in terms {
        parts[e[0] as usize].push((&e[1..], c));
    }
    let mut acc = ComplexBall::zero(prec);
    for part in parts.into_iter().rev() {
        acc = acc.mul(&z[0]).add(&eval_terms_ball(part, &z[1..], prec));
    }
    acc
}

fn eval_terms_f64(terms: Vec<(&[u32], &BigInt)>, z: &[F64Ball]) -> F64Ball {
    if terms.is_empty() {
        return F64Ball::zero();
    }
    if z.is_empty() {
        let mut s = BigInt::zero();
        for (_, c) in terms {
            s += c;
        }
        return int_to_f64ball(&s);
    }
    let d = terms.iter().map(|(e, _)| e[0]).max().unwrap() as usize;
    let mut parts: Vec<Vec<(&[u32], &BigInt)>> = vec![vec![]; d + 1];
    for (e, c) in terms {
        parts[e[0] as usize].push((&e[1..], c));
    }
    let mut acc = F64Ball::zero();
    for part in parts.into_iter().rev() {
        acc = acc.mul(&z[0]).add(&eval_terms_f64(part, &z[1..]));
    }
    acc
}

/// Sound `f64` ball around an integer.
pub fn int_to_f64ball(n: &BigInt) -> F64Ball {
    let (lo, hi) = Dyadic::from_int(n.clone()).to_f64_bounds();
    let m = lo + (hi - lo) / 2.0;
    F64Ball::new(m, 0.0, hi - lo)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, o.arity);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        self + &(-o)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial { arity: self.arity, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, o.arity);
        let mut r = IntPolynomial::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }
}

fn var_name(arity: usize, i: usize) -> String {
    if arity == 1 {
        "z".to_string()
    } else {
        format!("z{}", i + 1)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest total degree first, graded-lex
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { var_name(self.arity, i) } else { format!("{}^{}", var_name(self.arity, i), k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    arity: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| TermRepr { exp: e.clone(), coef: c.to_string() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        if r.arity == 0 {
            return Err(serde::de::Error::custom("arity must be positive"));
        }
        let mut p = IntPolynomial::zero(r.arity);
        for t in r.terms {
            if t.exp.len() != r.arity {
                return Err(serde::de::Error::custom("exponent length differs from arity"));
            }
            let c: BigInt = t.coef.parse().map_err(serde::de::Error::custom)?;
            p.add_term(t.exp, c);
        }
        Ok(p)
    }
}

/// `f64` coefficient vector of a univariate polynomial (approximate).
pub fn approx_coeffs(p: &IntPolynomial) -> Vec<f64> {
    p.to_univariate().unwrap().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    type Cq = (Rational, Rational);

    fn cmul(a: &Cq, b: &Cq) -> Cq {
        (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    }

    fn exact_eval(p: &IntPolynomial, z: &[Cq]) -> Cq {
        let mut acc = (int(0), int(0));
        for (e, c) in p.terms() {
            let mut t = (Rational::from_integer(c.clone()), int(0));
            for (x, &k) in z.iter().zip(e) {
                for _ in 0..k {
                    t = cmul(&t, x);
                }
            }
            acc = (&acc.0 + &t.0, &acc.1 + &t.1);
        }
        acc
    }

    #[test]
    fn degree_and_norm() {
        let p = IntPolynomial::parse("3*z1^2*z2 - 7*z2 + 1").unwrap();
        assert_eq!(p.arity(), 2);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.norm(), BigInt::from(7));
        assert_eq!(IntPolynomial::zero(2).degree(), None);
    }

    #[test]
    fn ball_examples() {
        let sq = IntPolynomial::parse("z^2").unwrap();
        let r = sq.eval_ball(&[ComplexBall::from_i64(1, 128)]).unwrap();
        assert!(r.contains_rational(&int(1)) && r.is_exact());
        let id = IntPolynomial::parse("z").unwrap();
        let half = ComplexBall::from_f64(0.0, 0.0, 0.5, 128);
        let r = id.eval_ball(&[half.clone()]).unwrap();
        assert!(r.contains_ball(&half) && half.contains_ball(&r));
        let p = IntPolynomial::parse("z^2 - 2").unwrap();
        let zr = rat(141421356, 100000000);
        let z = ComplexBall::from_rational(&zr, 128).inflate(&Dyadic::from_f64(1e-8));
        let v = p.eval_ball(&[z]).unwrap();
        assert!(v.contains_rational(&(&zr * &zr - int(2))));
        let (m, _) = v.mid_f64();
        assert!((m + 6.712126e-9).abs() < 1e-14);
        assert!(v.rad_f64() <= 6e-8);
        assert!(matches!(p.eval_ball(&[]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn serde_form() {
        let p = IntPolynomial::parse("z1*z2 - z1").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"arity":2,"terms":[{"exp":[1,0],"coef":"-1"},{"exp":[1,1],"coef":"1"}]}"#);
        let q: IntPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn display_round_trip() {
        for s in ["z^5 - z + 1", "-3*z1^2*z2 + z2 - 4", "4*z^2 - 1", "7"] {
            let p = IntPolynomial::parse(s).unwrap();
            assert_eq!(IntPolynomial::parse_with_arity(&p.to_string(), p.arity()).unwrap(), p);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn ball_evaluation_is_sound(coeffs in proptest::collection::vec(-1000i64..1000, 10),
                                    pts in proptest::collection::vec((-99i64..99, 1i64..99), 4),
                                    prec in 24u32..160) {
            let mons = crate::poly::enumerate::monomials(2, 3);
            let p = IntPolynomial::new(2, mons.into_iter().zip(coeffs.iter().map(|&c| BigInt::from(c))));
            let z: Vec<Cq> = vec![(rat(pts[0].0, pts[0].1), rat(pts[1].0, pts[1].1)),
                                  (rat(pts[2].0, pts[2].1), rat(pts[3].0, pts[3].1))];
            let balls: Vec<ComplexBall> = z.iter().map(|(a, b)| ComplexBall::from_complex_rational(a, b, prec)).collect();
            let v = p.eval_ball(&balls).unwrap();
            let (re, im) = exact_eval(&p, &z);
            prop_assert!(v.contains_point(&re, &im));
        }
    }
}
