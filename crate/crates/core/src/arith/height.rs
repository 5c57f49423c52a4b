//! Projective points over Q̄ and their absolute logarithmic Weil height.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::algebraic::{compositum, AlgebraicNumber, Precision, DEFAULT_DEGREE_CAP};
use super::dyadic::Dyadic;
use super::enclosure::Enclosure;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Default width target for height enclosures, `2^-40`.
pub const DEFAULT_TOLERANCE: f64 = 9.094947017729282e-13;

#[derive(Debug, Clone)]
pub enum Coord {
    Rational(Rational),
    Algebraic(AlgebraicNumber),
}

impl Coord {
    /// Degree-one algebraic numbers become rationals.
    pub fn from_algebraic(a: AlgebraicNumber) -> Self {
        match a.as_rational() {
            Some(q) => Coord::Rational(q),
            None => Coord::Algebraic(a),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coord::Rational(q) => q.is_zero(),
            Coord::Algebraic(a) => a.is_zero(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Coord::Rational(_) => 1,
            Coord::Algebraic(a) => a.degree(),
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        match self {
            Coord::Rational(q) => AlgebraicNumber::from_rational(q),
            Coord::Algebraic(a) => a.clone(),
        }
    }

    /// Parses `a/b` or `root(c0,c1,…;re[,im])`, the root of `Σ c_i z^i` nearest `re + i·im`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("root(").and_then(|b| b.strip_suffix(')')) {
            let (cs, at) = body
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("expected root(c0,…,cn;re[,im]) in {s:?}")))?;
            let coeffs: Vec<BigInt> = cs
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}"))))
                .collect::<Result<_>>()?;
            let parts: Vec<f64> = at
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad approximation {x:?}"))))
                .collect::<Result<_>>()?;
            let approx = Complex64::new(parts[0], parts.get(1).copied().unwrap_or(0.0));
            return Ok(Coord::from_algebraic(AlgebraicNumber::new(coeffs, approx)?));
        }
        Ok(Coord::Rational(parse_rational(s)?))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Rational(q) => write!(f, "{}", format_rational(q)),
            Coord::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoordRepr {
    Rational(String),
    Algebraic(AlgebraicNumber),
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coord::Rational(q) => CoordRepr::Rational(format_rational(q)).serialize(s),
            Coord::Algebraic(a) => a.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match CoordRepr::deserialize(d)? {
            CoordRepr::Rational(s) => parse_rational(&s).map(Coord::Rational).map_err(serde::de::Error::custom),
            CoordRepr::Algebraic(a) => Ok(Coord::from_algebraic(a)),
        }
    }
}

/// A point `[x_0 : … : x_N]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<Coord>", into = "Vec<Coord>")]
pub struct ProjectivePoint {
    coords: Vec<Coord>,
}

impl TryFrom<Vec<Coord>> for ProjectivePoint {
    type Error = Error;
    fn try_from(v: Vec<Coord>) -> Result<Self> {
        ProjectivePoint::new(v)
    }
}

impl From<ProjectivePoint> for Vec<Coord> {
    fn from(p: ProjectivePoint) -> Self {
        p.coords
    }
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Coord>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("a point needs at least one coordinate".into()));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn rational(coords: &[Rational]) -> Result<Self> {
        Self::new(coords.iter().cloned().map(Coord::Rational).collect())
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// Parses `[x0:x1:…]`, each coordinate as in [`Coord::parse`].
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [x0:x1:…], got {s:?}")))?;
        Self::new(body.split(':').map(Coord::parse).collect::<Result<_>>()?)
    }

    /// Degree over Q of the field generated by the coordinates, when a
    /// single coordinate is irrational (its degree) or all are rational (1).
    pub fn simple_field_degree(&self) -> Option<usize> {
        let algebraic: Vec<usize> = self.coords.iter().map(|c| c.degree()).filter(|&d| d > 1).collect();
        match algebraic.len() {
            0 => Some(1),
            1 => Some(algebraic[0]),
            _ => None,
        }
    }

    /// `[K(p) : Q]`, through the compositum for several algebraic coordinates.
    pub fn field_degree(&self, opts: &HeightOptions) -> Result<usize> {
        if let Some(d) = self.simple_field_degree() {
            return Ok(d);
        }
        let alg: Vec<AlgebraicNumber> = self
            .coords
            .iter()
            .filter_map(|c| if let Coord::Algebraic(a) = c { Some(a.clone()) } else { None })
            .collect();
        Ok(compositum(&alg, opts.precision, opts.degree_cap)?.degree)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HeightOptions {
    pub precision: Precision,
    pub degree_cap: usize,
    pub tolerance: f64,
}

impl Default for HeightOptions {
    fn default() -> Self {
        HeightOptions { precision: Precision::from_env(), degree_cap: DEFAULT_DEGREE_CAP, tolerance: DEFAULT_TOLERANCE }
    }
}

fn ln_int(n: &BigInt) -> Enclosure {
    let (lo, hi) = Dyadic::from_int(n.abs()).ln_bounds();
    Enclosure::new(lo, hi)
}

fn ln_max(m: &BigInt, lo: &Dyadic, hi: &Dyadic) -> Enclosure {
    let md = Dyadic::from_int(m.clone());
    let a = Dyadic::max(&md, lo);
    let b = Dyadic::max(&md, hi);
    Enclosure::new(a.ln_bounds().0, b.ln_bounds().1)
}

/// Common denominator scaling: integers `n_i = λ x_i` with `gcd = 1`, and `λ`.
fn integral_coprime(rs: &[Rational]) -> (Vec<BigInt>, Rational) {
    let l = rs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ns: Vec<BigInt> = rs.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ns.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return (ns, Rational::from_integer(l));
    }
    (ns.iter().map(|n| n / &g).collect(), Rational::new(l, g))
}

pub fn weil_height(p: &ProjectivePoint) -> Result<Enclosure> {
    weil_height_with(p, &HeightOptions::default())
}

pub fn weil_height_with(p: &ProjectivePoint, opts: &HeightOptions) -> Result<Enclosure> {
    let rationals: Vec<Rational> =
        p.coords.iter().filter_map(|c| if let Coord::Rational(q) = c { Some(q.clone()) } else { None }).collect();
    let algebraic: Vec<AlgebraicNumber> =
        p.coords.iter().filter_map(|c| if let Coord::Algebraic(a) = c { Some(a.clone()) } else { None }).collect();
    let (ns, lambda) = integral_coprime(&rationals);
    let m = ns.iter().map(|n| n.abs()).max().unwrap_or_default();
    if algebraic.is_empty() {
        return Ok(ln_int(&m).max(&Enclosure::point(0.0)));
    }
    if algebraic.len() == 1 && m.is_zero() {
        // [0 : … : α : … : 0] = [0 : … : 1 : … : 0]
        return Ok(Enclosure::point(0.0));
    }
    let total: usize = algebraic.iter().map(|a| a.degree()).product();
    if total > opts.degree_cap {
        return Err(Error::DegreeCapExceeded { degree: total, cap: opts.degree_cap });
    }
    for bits in opts.precision.schedule() {
        let h = if algebraic.len() == 1 {
            single_algebraic_height(&algebraic[0], &m, &lambda, bits)?
        } else {
            multi_algebraic_height(&algebraic, &m, &lambda, rationals.is_empty(), opts, bits)?
        };
        if h.width() <= opts.tolerance {
            return Ok(h);
        }
    }
    Err(Error::PrecisionExhausted { bits: opts.precision.ceiling })
}

/// `[m_1 : … : α]` with coprime integers `m_j`: the finite places
/// contribute `log lc(f_{λα})`, the archimedean ones `Σ log max(m, |σ(λα)|)`.
fn single_algebraic_height(a: &AlgebraicNumber, m: &BigInt, lambda: &Rational, bits: u32) -> Result<Enclosure> {
    let scaled = a.refine(bits)?.scale(lambda);
    let mut acc = ln_int(scaled.leading_coefficient());
    for c in scaled.conjugates() {
        acc = acc.add(&ln_max(m, &c.abs_lower(), &c.abs_upper()));
    }
    Ok(acc.scale(1.0 / scaled.degree() as f64))
}

fn multi_algebraic_height(
    algebraic: &[AlgebraicNumber],
    m: &BigInt,
    lambda: &Rational,
    no_rationals: bool,
    opts: &HeightOptions,
    bits: u32,
) -> Result<Enclosure> {
    if no_rationals || !lambda.is_integer() || !algebraic.iter().all(|a| a.is_algebraic_integer()) {
        return Err(Error::UnsupportedPoint(
            "several algebraic coordinates are supported when they are algebraic integers and the rational \
             coordinates, cleared of denominators, are coprime"
                .into(),
        ));
    }
    // λ is the lcm L of the rational denominators; λα_i stay integral and
    // the coprime rational integers make every finite place contribute 0
    let c = compositum(algebraic, Precision { start: bits, ceiling: bits.max(opts.precision.ceiling) }, opts.degree_cap)?;
    let l = Dyadic::from_int(lambda.to_integer());
    let mut acc = Enclosure::point(0.0);
    for emb in &c.embeddings {
        let mut lo = Dyadic::zero();
        let mut hi = Dyadic::zero();
        for b in emb {
            lo = Dyadic::max(&lo, &(&b.abs_lower() * &l));
            hi = Dyadic::max(&hi, &(&b.abs_upper() * &l));
        }
        acc = acc.add(&ln_max(m, &lo, &hi));
    }
    Ok(acc.scale(1.0 / c.degree as f64))
}

/// Points `[1 : ζ^{a_1} : … : ζ^{a_N}]` with `ζ = exp(2πi/n)`.
pub fn roots_of_unity_points(n_dim: usize, n: u32) -> Result<Vec<ProjectivePoint>> {
    if n_dim < 1 || n < 1 {
        return Err(Error::InvalidParameter("need N ≥ 1 and n ≥ 1".into()));
    }
    let roots: Vec<Coord> = (0..n).map(|k| Coord::from_algebraic(AlgebraicNumber::root_of_unity(n, k))).collect();
    let count = (n as usize).pow(n_dim as u32);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let mut coords = vec![Coord::Rational(Rational::one())];
        let mut k = idx;
        for _ in 0..n_dim {
            coords.push(roots[k % n as usize].clone());
            k /= n as usize;
        }
        out.push(ProjectivePoint::new(coords)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    fn h(s: &str) -> Enclosure {
        weil_height(&ProjectivePoint::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(h("[1:1]").contains(0.0));
        assert!(h("[2:3]").contains(3f64.ln()));
        let s2 = h("[1:root(-2,0,1;1.4)]");
        assert!(s2.contains(0.5 * 2f64.ln()) && s2.width() <= DEFAULT_TOLERANCE);
        assert!(matches!(ProjectivePoint::parse("[0:0]"), Err(Error::InvalidPoint(_))));
    }

    #[test]
    fn algebraic_heights_against_mahler_measure() {
        // golden ratio: M(z²−z−1) = φ
        let g = h("[1:root(-1,-1,1;1.6)]");
        assert!(g.contains(0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln()));
        // [2 : √2] = [√2 : 1]: h = h(√2) = log 2 / 2
        assert!(h("[2:root(-2,0,1;1.4)]").contains(0.5 * 2f64.ln()));
        // [3 : √2]: conjugates ±√2 have |·| < 3, scaled minpoly z²−2, h = log 3
        assert!(h("[3:root(-2,0,1;1.4)]").contains(3f64.ln()));
        // [1 : √2/2]: λα = √2/2 with minpoly 2z²−1, M = 2·1·1 → log 2 / 2
        assert!(h("[2:root(-2,0,1;1.4)]").overlaps(&h("[1:root(-1,0,2;0.7)]")));
        // 2^{1/3}: M = 2 → log 2 / 3
        assert!(h("[1:root(-2,0,0,1;1.26)]").contains(2f64.ln() / 3.0));
    }

    #[test]
    fn multi_algebraic_and_roots_of_unity() {
        let pts = roots_of_unity_points(2, 3).unwrap();
        assert_eq!(pts.len(), 9);
        for p in &pts {
            let e = weil_height(p).unwrap();
            assert!(e.contains(0.0) && e.width() < 1e-12, "{p}: {e:?}");
        }
        let names: Vec<String> = roots_of_unity_points(1, 2).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["[1:1]", "[1:-1]"]);
        assert_eq!(roots_of_unity_points(1, 1).unwrap().len(), 1);
        // [1 : √2 : √3]: embeddings (±√2, ±√3), h = log √3
        let e = h("[1:root(-2,0,1;1.4):root(-3,0,1;1.7)]");
        assert!(e.contains(0.5 * 3f64.ln()), "{e:?}");
        let err = weil_height(&ProjectivePoint::parse("[1:root(-1,0,2;0.7):root(-3,0,1;1.7)]").unwrap());
        assert!(matches!(err, Err(Error::UnsupportedPoint(_))));
    }

    #[test]
    fn serde_round_trip() {
        let p = ProjectivePoint::parse("[2/3:root(-2,0,1;-1.4)]").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with("[\"2/3\",{\"minpoly\":[-2,0,1]"));
        let q: ProjectivePoint = serde_json::from_str(&s).unwrap();
        assert!(weil_height(&p).unwrap().overlaps(&weil_height(&q).unwrap()));
    }

    proptest! {
        #[test]
        fn height_is_projective(a in -50i64..50, b in 1i64..50, c in -50i64..50, u in 1i64..30, v in 1i64..30) {
            prop_assume!(a != 0 || c != 0);
            let lam = rat(u, v);
            let p = ProjectivePoint::rational(&[rat(a, b), int(c)]).unwrap();
            let q = ProjectivePoint::rational(&[rat(a, b) * &lam, int(c) * &lam]).unwrap();
            let hp = weil_height(&p).unwrap();
            let hq = weil_height(&q).unwrap();
            prop_assert!(hp.overlaps(&hq));
            prop_assert!(hp.lo >= -DEFAULT_TOLERANCE);
        }

        #[test]
        fn quadratic_height_is_projective(a in 1i64..20, u in 1i64..12, v in 1i64..12) {
            let alpha = Coord::parse("root(-5,0,1;2.2)").unwrap();
            let p = ProjectivePoint::new(vec![Coord::Rational(int(a)), alpha.clone()]).unwrap();
            // λ·[a : √5] = [λa : λ√5]
            let lam = rat(u, v);
            let Coord::Algebraic(al) = &alpha else { unreachable!() };
            let q = ProjectivePoint::new(vec![Coord::Rational(int(a) * &lam), Coord::Algebraic(al.scale(&lam))]).unwrap();
            let hp = weil_height(&p).unwrap();
            let hq = weil_height(&q).unwrap();
            prop_assert!(hp.overlaps(&hq), "{:?} vs {:?}", hp, hq);
            prop_assert!(hp.lo >= -DEFAULT_TOLERANCE);
        }
    }
}
