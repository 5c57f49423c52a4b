//! Rational parameters `z = a/b` in `|z| < r` whose image has height at most `T`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::map::AnalyticMap;
use crate::arith::algebraic::Precision;
use crate::arith::ball::ComplexBall;
use crate::arith::dyadic::Dyadic;
use crate::arith::enclosure::Enclosure;
use crate::arith::height::ProjectivePoint;
use crate::arith::rational::{serde_rational, Rational};
use crate::error::{Error, Result};

/// Largest enumeration accepted, in parameters.
pub const POINT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Polynomial maps only; membership decided exactly.
    ExactRational,
    /// Membership tested by enclosures; undecided points are flagged.
    Candidate,
}

impl FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-rational" | "exact" => Ok(Policy::ExactRational),
            "candidate" => Ok(Policy::Candidate),
            _ => Err(Error::Parse(format!("unknown policy '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    /// Certified: no rational point of height `≤ T` fits the enclosure.
    NonMember,
    /// Some rational point of height `≤ T` still fits at the precision ceiling.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct RationalPointRecord {
    #[serde(with = "serde_rational")]
    pub z: Rational,
    pub membership: Membership,
    /// `[1 : f_1(z) : … : f_N(z)]` for members.
    pub image: Option<ProjectivePoint>,
    pub height: Option<Enclosure>,
    pub note: Option<String>,
}

impl RationalPointRecord {
    pub fn is_member(&self) -> bool {
        self.membership == Membership::Member
    }

    /// Affine image `(f_1(z), …, f_N(z))` of a member.
    pub fn affine_image(&self) -> Option<Vec<Rational>> {
        let p = self.image.as_ref()?;
        p.coords()[1..]
            .iter()
            .map(|c| match c {
                crate::arith::height::Coord::Rational(q) => Some(q.clone()),
                crate::arith::height::Coord::Algebraic(a) => a.as_rational(),
            })
            .collect()
    }
}

/// Largest integer `n ≥ 1` with `ln n ≤ T`: `H(x) ≤ n` iff `h(x) ≤ T`.
pub fn height_cap(t: f64) -> Result<u64> {
    if !(t >= 0.0) || t > 40.0 {
        return Err(Error::InvalidParameter(format!("height bound T = {t} must lie in [0, 40]")));
    }
    let mut n = t.exp().floor().max(1.0) as u64;
    while ((n + 1) as f64).ln() <= t {
        n += 1;
    }
    while n > 1 && (n as f64).ln() > t {
        n -= 1;
    }
    Ok(n)
}

/// Multiplicative height `max(D, |D x_i|)` of `[1 : x_1 : … : x_N]`,
/// `D` the common denominator (the integers are then coprime).
pub fn affine_height(x: &[Rational]) -> BigInt {
    let d = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    x.iter().map(|q| (q.numer() * (&d / q.denom())).abs()).fold(d.clone(), |a, b| a.max(b))
}

fn log_height(h: &BigInt) -> Enclosure {
    let (lo, hi) = Dyadic::from_int(h.clone()).ln_bounds();
    Enclosure::new(lo.max(0.0), hi.max(0.0))
}

/// Nonnegative fractions `a/b < r` with `b ≤ n`, increasing (Farey order).
fn farey_below(n: u64, r: &Rational) -> Vec<(u64, u64)> {
    let (rn, rd) = (r.numer().to_u64().unwrap_or(u64::MAX), r.denom().to_u64().unwrap_or(u64::MAX));
    let below = |a: u64, b: u64| (a as u128) * (rd as u128) < (rn as u128) * (b as u128);
    let mut out = vec![];
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    if below(a, b) {
        out.push((a, b));
    }
    while c <= n && below(c, d) {
        out.push((c, d));
        let k = (n + b) / d;
        let (na, nb) = (k * c - a, k * d - b);
        (a, b, c, d) = (c, d, na, nb);
    }
    out
}

/// Candidate parameters `a/b` in lowest terms with `max(|a|, |b|) ≤ n` and
/// `|a/b| < r`, increasing.
pub fn farey_parameters(n: u64, r: &Rational) -> Vec<Rational> {
    let pos = farey_below(n, r);
    let mut out: Vec<Rational> = pos
        .iter()
        .rev()
        .filter(|&&(a, _)| a > 0)
        .map(|&(a, b)| -Rational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    out.extend(pos.iter().map(|&(a, b)| Rational::new(BigInt::from(a), BigInt::from(b))));
    out
}

fn member(z: Rational, image: Vec<Rational>, cap: u64) -> Option<RationalPointRecord> {
    let h = affine_height(&image);
    if h > BigInt::from(cap) {
        return None;
    }
    let mut coords = vec![Rational::one()];
    coords.extend(image);
    Some(RationalPointRecord {
        z,
        membership: Membership::Member,
        image: Some(ProjectivePoint::rational(&coords).expect("first coordinate is 1")),
        height: Some(log_height(&h)),
        note: None,
    })
}

/// Does `[lo, hi]` contain some `p/q` with `q ≤ cap`, `|p| ≤ cap`?
fn admits_small_rational(lo: f64, hi: f64, cap: u64) -> bool {
    let c = cap as f64;
    if hi < -c || lo > c {
        return false;
    }
    (1..=cap).any(|q| {
        let qf = q as f64;
        let a = (lo * qf).ceil().max(-c);
        let b = (hi * qf).floor().min(c);
        a <= b
    })
}

/// Membership of `f(z)` under the candidate policy.
fn candidate(f: &AnalyticMap, z: Rational, cap: u64, precision: &Precision) -> RationalPointRecord {
    if let Some(image) = f.eval_exact(&z) {
        return member(z.clone(), image, cap).unwrap_or(RationalPointRecord {
            z,
            membership: Membership::NonMember,
            image: None,
            height: None,
            note: Some("exact image exceeds the height bound".into()),
        });
    }
    let mut last = 0;
    for prec in precision.schedule() {
        last = prec;
        let zb = ComplexBall::from_rational(&z, prec);
        for (i, comp) in f.components.iter().enumerate() {
            if comp.eval_exact(&z).is_some() {
                continue;
            }
            let v = comp.eval_ball(&zb);
            let (lo, hi) = v.re_bounds();
            let (lo, hi) = (lo.to_f64_bounds().0, hi.to_f64_bounds().1);
            let im_rad = v.im().abs().to_f64_bounds().0 - v.rad_f64();
            if im_rad > 0.0 || !admits_small_rational(lo, hi, cap) {
                return RationalPointRecord {
                    z,
                    membership: Membership::NonMember,
                    image: None,
                    height: None,
                    note: Some(format!("component {} excludes every rational of height ≤ T at {prec} bits", i + 1)),
                };
            }
        }
    }
    RationalPointRecord {
        z,
        membership: Membership::Inconclusive,
        image: None,
        height: None,
        note: Some(format!("a rational of height ≤ T fits the enclosure at {last} bits")),
    }
}

pub fn enumerate_disk_rational_points(
    f: &AnalyticMap,
    r: &Rational,
    t: f64,
    policy: Policy,
) -> Result<Vec<RationalPointRecord>> {
    enumerate_disk_rational_points_with(f, r, t, policy, &Precision::from_env())
}

/// Exact policy: the members only. Candidate policy: every parameter of the
/// range, members first confirmed exactly, the rest flagged.
pub fn enumerate_disk_rational_points_with(
    f: &AnalyticMap,
    r: &Rational,
    t: f64,
    policy: Policy,
    precision: &Precision,
) -> Result<Vec<RationalPointRecord>> {
    let rf = r.to_f64().unwrap_or(f64::INFINITY);
    if !r.is_positive() {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    if rf >= f.validity {
        return Err(Error::RadiusExceeded { r: rf, validity: f.validity });
    }
    if policy == Policy::ExactRational && !f.is_polynomial() {
        return Err(Error::PolicyViolation("exact-rational membership needs polynomial components".into()));
    }
    let cap = height_cap(t)?;
    let estimate = 0.61 * (cap as f64).powi(2) * rf.min(1.0) + 1.0;
    if estimate > POINT_BUDGET as f64 {
        return Err(Error::BudgetExceeded { count: estimate, budget: POINT_BUDGET });
    }
    let params = farey_parameters(cap, r);
    Ok(match policy {
        Policy::ExactRational => params
            .into_iter()
            .filter_map(|z| {
                let image = f.eval_exact(&z).expect("polynomial map");
                member(z, image, cap)
            })
            .collect(),
        Policy::Candidate => params.into_iter().map(|z| candidate(f, z, cap, precision)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{format_rational, rat};

    fn zs(v: &[RationalPointRecord]) -> Vec<String> {
        v.iter().filter(|p| p.is_member()).map(|p| format_rational(&p.z)).collect()
    }

    #[test]
    fn caps() {
        assert_eq!(height_cap(0.0).unwrap(), 1);
        assert_eq!(height_cap(5f64.ln()).unwrap(), 5);
        assert_eq!(height_cap(100f64.ln()).unwrap(), 100);
        assert_eq!(height_cap(1.0).unwrap(), 2);
        assert!(height_cap(-1.0).is_err());
    }

    #[test]
    fn parabola_examples() {
        let f = AnalyticMap::parse("z, z^2").unwrap();
        let pts = enumerate_disk_rational_points(&f, &rat(9, 10), 5f64.ln(), Policy::ExactRational).unwrap();
        assert_eq!(zs(&pts), ["-1/2", "0", "1/2"]);
        assert!(pts[0].height.unwrap().contains(4f64.ln()));
        assert!(pts[1].height.unwrap().contains(0.0));
        let pts = enumerate_disk_rational_points(&f, &rat(9, 10), 0.0, Policy::ExactRational).unwrap();
        assert_eq!(zs(&pts), ["0"]);
        assert!(matches!(
            enumerate_disk_rational_points(&f, &rat(1, 1), 1.0, Policy::ExactRational),
            Err(Error::RadiusExceeded { .. })
        ));
    }

    #[test]
    fn exp_candidates() {
        let f = AnalyticMap::parse("z, exp(z)").unwrap();
        assert!(matches!(
            enumerate_disk_rational_points(&f, &rat(9, 10), 1.0, Policy::ExactRational),
            Err(Error::PolicyViolation(_))
        ));
        let pts = enumerate_disk_rational_points(&f, &rat(9, 10), 10f64.ln(), Policy::Candidate).unwrap();
        assert_eq!(zs(&pts), ["0"]);
        assert!(pts.len() > 20);
        assert!(pts.iter().filter(|p| !p.is_member()).all(|p| p.membership == Membership::NonMember));
    }

    #[test]
    fn farey_order() {
        let v = farey_parameters(4, &rat(1, 1));
        let s: Vec<String> = v.iter().map(format_rational).collect();
        assert_eq!(s, ["-3/4", "-2/3", "-1/2", "-1/3", "-1/4", "0", "1/4", "1/3", "1/2", "2/3", "3/4"]);
    }
}
