//! Algebraic numbers as (integer minimal polynomial, isolating ball).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ball::{BallRepr, ComplexBall};
use super::fastball::F64Ball;
use super::rational::Rational;
use super::upoly;
use crate::error::{Error, Result};

/// Working precision policy: start bits, doubled on demand up to the ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub start: u32,
    pub ceiling: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: 128, ceiling: 4096 }
    }
}

impl Precision {
    /// Reads the ceiling from `LIOUVILLE_PREC_CEILING` when set.
    pub fn from_env() -> Self {
        let mut p = Precision::default();
        if let Some(c) = std::env::var("LIOUVILLE_PREC_CEILING").ok().and_then(|s| s.parse().ok()) {
            p.ceiling = c;
        }
        p
    }

    /// The doubling schedule `start, 2·start, …, ceiling`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![];
        let mut p = self.start.min(self.ceiling);
        loop {
            out.push(p);
            if p >= self.ceiling {
                break;
            }
            p = (p * 2).min(self.ceiling);
        }
        out
    }
}

pub const DEFAULT_DEGREE_CAP: usize = 16;

#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    minpoly: Vec<BigInt>,
    conjugates: Vec<ComplexBall>,
    index: usize,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.ball().overlaps(other.ball())
    }
}

fn validate_minpoly(p: &[BigInt]) -> Result<Vec<BigInt>> {
    let p = upoly::trim(p.to_vec());
    let deg = upoly::degree(&p).ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::InvalidParameter("minimal polynomial must have degree ≥ 1".into()));
    }
    if !upoly::content(&p).is_one() {
        return Err(Error::InvalidParameter("minimal polynomial must have content 1".into()));
    }
    if !p[deg].is_positive() {
        return Err(Error::InvalidParameter("minimal polynomial must have a positive leading coefficient".into()));
    }
    if deg > 1 && !upoly::is_squarefree(&p) {
        return Err(Error::InvalidParameter("minimal polynomial is not squarefree".into()));
    }
    Ok(p)
}

impl AlgebraicNumber {
    /// The root of `minpoly` closest to `approx`.
    pub fn new(minpoly: Vec<BigInt>, approx: Complex64) -> Result<Self> {
        Self::with_precision(minpoly, approx, Precision::default())
    }

    pub fn with_precision(minpoly: Vec<BigInt>, approx: Complex64, prec: Precision) -> Result<Self> {
        let p = validate_minpoly(&minpoly)?;
        let conjugates = upoly::isolate_roots(&p, prec.start, prec.ceiling)?;
        if conjugates.len() > 1 && !upoly::is_irreducible(&p, &conjugates) {
            return Err(Error::InvalidParameter("minimal polynomial is reducible over Z".into()));
        }
        let index = nearest(&conjugates, approx);
        Ok(AlgebraicNumber { minpoly: p, conjugates, index })
    }

    /// The unique root of `minpoly` whose isolating ball meets `b`.
    pub fn from_box(minpoly: Vec<BigInt>, b: &ComplexBall) -> Result<Self> {
        let p = validate_minpoly(&minpoly)?;
        let prec = Precision::default();
        let conjugates = upoly::isolate_roots(&p, prec.start.max(b.prec()), prec.ceiling)?;
        let hits: Vec<usize> = (0..conjugates.len()).filter(|&i| conjugates[i].overlaps(b)).collect();
        if hits.len() != 1 {
            return Err(Error::InvalidPoint(format!("box meets {} roots of the minimal polynomial", hits.len())));
        }
        if conjugates.len() > 1 && !upoly::is_irreducible(&p, &conjugates) {
            return Err(Error::InvalidParameter("minimal polynomial is reducible over Z".into()));
        }
        Ok(AlgebraicNumber { minpoly: p, conjugates, index: hits[0] })
    }

    pub fn from_rational(q: &Rational) -> Self {
        let p = vec![-q.numer().clone(), q.denom().clone()];
        let b = ComplexBall::from_rational(q, 128);
        AlgebraicNumber { minpoly: p, conjugates: vec![b], index: 0 }
    }

    /// `q^(1/n)`, the positive real root, for rational `q > 0` with
    /// `z^n − q` irreducible.
    pub fn real_root(q: &Rational, n: u32) -> Result<Self> {
        let mut p = vec![BigInt::zero(); n as usize + 1];
        p[0] = -q.numer().clone();
        p[n as usize] = q.denom().clone();
        let approx = q.to_f64().unwrap().powf(1.0 / n as f64);
        Self::new(upoly::primitive_part(&p), Complex64::new(approx, 0.0))
    }

    /// `exp(2πi k / n)`.
    pub fn root_of_unity(n: u32, k: u32) -> Self {
        let k = k % n;
        let m = n / n.gcd(&k).max(1);
        let m = if k == 0 { 1 } else { m };
        let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        Self::new(upoly::cyclotomic(m), Complex64::from_polar(1.0, angle)).expect("cyclotomic polynomials are irreducible")
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn leading_coefficient(&self) -> &BigInt {
        self.minpoly.last().unwrap()
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.leading_coefficient().is_one()
    }

    pub fn ball(&self) -> &ComplexBall {
        &self.conjugates[self.index]
    }

    pub fn conjugates(&self) -> &[ComplexBall] {
        &self.conjugates
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.degree() == 1 {
            Some(BigRational::new(-self.minpoly[0].clone(), self.minpoly[1].clone()))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 1 && self.minpoly[0].is_zero()
    }

    /// Re-isolates all conjugates at `prec` bits, keeping this root.
    pub fn refine(&self, prec: u32) -> Result<Self> {
        if let Some(q) = self.as_rational() {
            let b = ComplexBall::from_rational(&q, prec);
            return Ok(AlgebraicNumber { minpoly: self.minpoly.clone(), conjugates: vec![b], index: 0 });
        }
        if self.ball().prec() >= prec {
            return Ok(self.clone());
        }
        let conjugates = upoly::isolate_roots(&self.minpoly, prec, prec.max(4096))?;
        let hits: Vec<usize> = (0..conjugates.len()).filter(|&i| conjugates[i].overlaps(self.ball())).collect();
        if hits.len() != 1 {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        Ok(AlgebraicNumber { minpoly: self.minpoly.clone(), conjugates, index: hits[0] })
    }

    /// `λ·α` for rational `λ ≠ 0`, with its primitive minimal polynomial.
    pub fn scale(&self, lambda: &Rational) -> Self {
        assert!(!lambda.is_zero());
        let u = lambda.numer();
        let v = lambda.denom();
        let d = self.degree();
        // λα is a root of Σ c_i v^i u^(d−i) x^i
        let scaled: Vec<BigInt> =
            self.minpoly.iter().enumerate().map(|(i, c)| c * v.pow(i as u32) * u.pow((d - i) as u32)).collect();
        let p = upoly::primitive_part(&scaled);
        let prec = self.ball().prec();
        let lb = ComplexBall::from_rational(lambda, prec);
        let conjugates = self.conjugates.iter().map(|c| c.mul(&lb)).collect();
        AlgebraicNumber { minpoly: p, conjugates, index: self.index }
    }
}

fn nearest(balls: &[ComplexBall], z: Complex64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, b) in balls.iter().enumerate() {
        let (re, im) = b.mid_f64();
        let d = (re - z.re).hypot(im - z.im);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.ball().mid_f64();
        let cs: Vec<String> = self.minpoly.iter().map(|c| c.to_string()).collect();
        write!(f, "root({};{re},{im})", cs.join(","))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct AlgebraicRepr {
    minpoly: Vec<IntRepr>,
    #[serde(rename = "box")]
    bx: BallRepr,
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = AlgebraicRepr {
            minpoly: self
                .minpoly
                .iter()
                .map(|c| match c.to_i64() {
                    Some(x) if x.unsigned_abs() < (1u64 << 53) => IntRepr::Small(x),
                    _ => IntRepr::Big(c.to_string()),
                })
                .collect(),
            bx: BallRepr::from(self.ball()),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = AlgebraicRepr::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigInt>, _> = repr
            .minpoly
            .into_iter()
            .map(|c| match c {
                IntRepr::Small(x) => Ok(BigInt::from(x)),
                IntRepr::Big(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
            })
            .collect();
        let coeffs = coeffs.map_err(serde::de::Error::custom)?;
        let b = repr.bx.to_ball(128).map_err(serde::de::Error::custom)?;
        AlgebraicNumber::from_box(coeffs, &b).map_err(serde::de::Error::custom)
    }
}

/// The embeddings of the field generated by several algebraic numbers:
/// `embeddings[k][i]` encloses `σ_k(α_i)`, and `σ_0` is the identity.
#[derive(Debug, Clone)]
pub struct Compositum {
    pub degree: usize,
    pub embeddings: Vec<Vec<ComplexBall>>,
}

/// Builds the embeddings through the resultant polynomial
/// `R(x) = Π (x − Σ λ_i a_i α_i^(σ))` over all conjugate tuples, whose
/// irreducible factor through the identity tuple is the minimal polynomial
/// of a primitive element.
pub fn compositum(nums: &[AlgebraicNumber], prec: Precision, cap: usize) -> Result<Compositum> {
    let total: usize = nums.iter().map(|a| a.degree()).product();
    if total > cap {
        return Err(Error::DegreeCapExceeded { degree: total, cap });
    }
    if nums.is_empty() {
        return Ok(Compositum { degree: 1, embeddings: vec![vec![]] });
    }
    for bits in prec.schedule() {
        let refined: Vec<AlgebraicNumber> = nums.iter().map(|a| a.refine(bits)).collect::<Result<_>>()?;
        if let Some(c) = try_compositum(&refined, bits, total)? {
            return Ok(c);
        }
    }
    Err(Error::PrecisionExhausted { bits: prec.ceiling })
}

fn tuple_of(mut id: usize, radices: &[usize]) -> Vec<usize> {
    let mut t = Vec::with_capacity(radices.len());
    for &r in radices {
        t.push(id % r);
        id /= r;
    }
    t
}

fn try_compositum(nums: &[AlgebraicNumber], bits: u32, total: usize) -> Result<Option<Compositum>> {
    let radices: Vec<usize> = nums.iter().map(|a| a.degree()).collect();
    let own: usize = nums.iter().rev().fold(0, |acc, a| acc * a.degree() + a.index());
    // conjugates of the algebraic integers a_i α_i
    let scaled: Vec<Vec<ComplexBall>> =
        nums.iter().map(|a| a.conjugates().iter().map(|c| c.mul_int(a.leading_coefficient())).collect()).collect();
    let lambda_sets: [&[i64]; 4] = [&[1, 2, 3, 5, 7, 11], &[1, 3, 7, 13, 19, 29], &[2, 5, 11, 17, 23, 31], &[1, -2, 5, -9, 14, -21]];
    for lambdas in lambda_sets {
        let thetas: Vec<ComplexBall> = (0..total)
            .map(|id| {
                let t = tuple_of(id, &radices);
                t.iter().enumerate().fold(ComplexBall::zero(bits), |acc, (i, &j)| {
                    acc.add(&scaled[i][j].mul_int(&BigInt::from(lambdas[i % lambdas.len()])))
                })
            })
            .collect();
        let separated = (0..total).all(|i| ((i + 1)..total).all(|j| !thetas[i].overlaps(&thetas[j])));
        if !separated {
            continue;
        }
        // R(x) = Π (x − θ_t) is monic with integer coefficients
        let mut coeffs = vec![ComplexBall::from_i64(1, bits)];
        for th in &thetas {
            let neg = th.neg();
            let mut next = vec![ComplexBall::zero(bits); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].add(&c.mul(&neg));
            }
            coeffs = next;
        }
        let mut r_int = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            match round_to_integer(c) {
                Some(n) => r_int.push(n),
                None => return Ok(None),
            }
        }
        let fr: Vec<F64Ball> = thetas.iter().map(|t| t.to_f64_ball()).collect();
        let found = upoly::find_integral_factor(&BigInt::one(), &fr, Some(own), total, |g| {
            upoly::div_exact_z(&r_int, g).is_some()
        });
        let Some((mut subset, _)) = found else { return Ok(None) };
        subset.retain(|&t| t != own);
        subset.insert(0, own);
        let embeddings = subset
            .iter()
            .map(|&id| {
                let t = tuple_of(id, &radices);
                t.iter().enumerate().map(|(i, &j)| nums[i].conjugates()[j].clone()).collect()
            })
            .collect::<Vec<Vec<ComplexBall>>>();
        return Ok(Some(Compositum { degree: embeddings.len(), embeddings }));
    }
    Ok(None)
}

fn round_to_integer(b: &ComplexBall) -> Option<BigInt> {
    let r = b.re().to_rational().round().to_integer();
    let q = BigRational::from_integer(r.clone());
    if b.contains_rational(&q) && b.rad_f64() < 0.5 {
        Some(r)
    } else {
        None
    }
}
