//! Certified sup norms on disks by branch and bound over boundary arcs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::ballpoly::BallPolynomial;
use super::intpoly::IntPolynomial;
use crate::arith::ball::{BallRepr, ComplexBall, DEFAULT_PREC};
use crate::arith::enclosure::Enclosure;
use crate::arith::fastball::{horner_ball, F64Ball};
use crate::arith::rational::{serde_rational, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;
const MAX_ARCS: usize = 1 << 20;

/// A disk `{|z − c| < r}` with optional reference radii `r₀ < r₁`.
#[derive(Debug, Clone)]
pub struct DiskSpec {
    pub center: ComplexBall,
    pub radius: Rational,
    pub r0: Option<Rational>,
    pub r1: Option<Rational>,
}

impl DiskSpec {
    pub fn centered(radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidParameter("disk radius must be positive".into()));
        }
        Ok(DiskSpec { center: ComplexBall::zero(DEFAULT_PREC), radius, r0: None, r1: None })
    }

    pub fn with_reference(r0: Rational, r1: Rational) -> Result<Self> {
        if !(r0.is_positive() && r0 < r1 && r1 <= Rational::from_integer(1.into())) {
            return Err(Error::InvalidParameter("need 0 < r0 < r1 ≤ 1".into()));
        }
        Ok(DiskSpec { center: ComplexBall::zero(DEFAULT_PREC), radius: r1.clone(), r0: Some(r0), r1: Some(r1) })
    }
}

#[derive(Serialize, Deserialize)]
struct DiskRepr {
    center: BallRepr,
    #[serde(with = "serde_rational")]
    radius: Rational,
}

impl Serialize for DiskSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiskRepr { center: BallRepr::from(&self.center), radius: self.radius.clone() }.serialize(s)
    }
}

/// Sound `f64` enclosure of a positive rational: (value, absolute error).
pub(crate) fn rational_f64(q: &Rational) -> (f64, f64) {
    let v = q.to_f64().unwrap_or(f64::NAN);
    (v, v.abs() * 2.0 * f64::EPSILON + 1e-300)
}

struct Arc {
    a: f64,
    b: f64,
    upper: f64,
}

impl PartialEq for Arc {
    fn eq(&self, o: &Self) -> bool {
        self.upper == o.upper
    }
}
impl Eq for Arc {}
impl PartialOrd for Arc {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Arc {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.total_cmp(&o.upper)
    }
}

struct BoundaryEval {
    p0: Vec<F64Ball>,
    p1: Vec<F64Ball>,
    p2: Vec<F64Ball>,
    center: F64Ball,
    r: f64,
    r_err: f64,
}

fn derivative(c: &[F64Ball]) -> Vec<F64Ball> {
    c.iter().enumerate().skip(1).map(|(k, x)| x.scale(k as f64)).collect()
}

impl BoundaryEval {
    fn new(coeffs: Vec<F64Ball>, center: F64Ball, r: f64, r_err: f64) -> Self {
        let p1 = derivative(&coeffs);
        let p2 = derivative(&p1);
        BoundaryEval { p0: coeffs, p1, p2, center, r, r_err }
    }

    /// Ball around `c + r e^{iθ}` widened by `r·half_arc`.
    fn point(&self, theta: f64, half_arc: f64) -> (F64Ball, F64Ball) {
        let (s, c) = theta.sin_cos();
        // cos/sin are faithful to a few ulps
        let rad = self.r * half_arc + self.r_err + 4.0 * f64::EPSILON * self.r;
        let w = F64Ball::new(self.r * c, self.r * s, rad);
        (self.center.add(&w), w)
    }

    /// Upper bound of `|P|` on the arc `[a, b]` from the second-order
    /// expansion of `g(θ) = |P(c + r e^{iθ})|²` at the arc midpoint.
    fn upper(&self, a: f64, b: f64) -> f64 {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let (z, w) = self.point(m, 0.0);
        let v = horner_ball(&self.p0, &z);
        let dv = horner_ball(&self.p1, &z);
        // g' = 2 Re(conj(P) · P' · i w)
        let iw = F64Ball::new(-w.im, w.re, w.rad);
        let t = dv.mul(&iw);
        let g = v.abs_upper().powi(2);
        let vc = F64Ball::new(v.re, -v.im, v.rad);
        let prod = vc.mul(&t);
        let g1 = 2.0 * (prod.re.abs() + prod.rad) * (1.0 + 4.0 * f64::EPSILON);
        let (zb, wb) = self.point(m, h);
        let pa = horner_ball(&self.p0, &zb).abs_upper();
        let pb = horner_ball(&self.p1, &zb).abs_upper();
        let pc = horner_ball(&self.p2, &zb).abs_upper();
        let rw = wb.abs_upper();
        // |g''| ≤ 2|P'|²|w|² + 2|P|(|P''||w|² + |P'||w|)
        let g2 = 2.0 * pb * pb * rw * rw + 2.0 * pa * (pc * rw * rw + pb * rw);
        let bound = (g + g1 * h + 0.5 * g2 * h * h) * (1.0 + 8.0 * f64::EPSILON);
        // the crude ball bound is sometimes tighter on wide arcs
        bound.sqrt().min(pa) * (1.0 + 4.0 * f64::EPSILON)
    }

    fn lower(&self, theta: f64) -> f64 {
        horner_ball(&self.p0, &self.point(theta, 0.0).0).abs_lower()
    }
}

/// Enclosure of `max_{|z−c|=r} |P(z)|` with relative width ≤ `tol`.
pub fn sup_norm_on_disk(p: &BallPolynomial, disk: &DiskSpec, tol: f64) -> Result<Enclosure> {
    sup_norm_at_radius(p, &disk.center, &disk.radius, tol)
}

pub fn sup_norm_at_radius(p: &BallPolynomial, center: &ComplexBall, r: &Rational, tol: f64) -> Result<Enclosure> {
    if p.coeffs.iter().all(|c| c.is_exact() && c.contains_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let (rv, r_err) = rational_f64(r);
    let ev = BoundaryEval::new(p.to_f64_balls(), center.to_f64_ball(), rv, r_err);
    let d = p.degree().unwrap_or(0);
    let m = 64 * (d + 1);
    let step = std::f64::consts::TAU / m as f64;
    let mut lower = 0.0f64;
    let mut heap = BinaryHeap::with_capacity(2 * m);
    for k in 0..m {
        let a = k as f64 * step;
        let b = if k + 1 == m { std::f64::consts::TAU } else { (k + 1) as f64 * step };
        lower = lower.max(ev.lower(0.5 * (a + b)));
        heap.push(Arc { a, b, upper: ev.upper(a, b) });
    }
    let mut arcs = m;
    loop {
        let top = heap.pop().expect("nonempty arc set");
        if lower > 0.0 && top.upper - lower <= tol * lower {
            return Ok(Enclosure::new(lower, top.upper));
        }
        if arcs >= MAX_ARCS || top.b - top.a < 1e-13 {
            return Err(Error::PrecisionExhausted { bits: 53 });
        }
        let mid = 0.5 * (top.a + top.b);
        lower = lower.max(ev.lower(0.5 * (top.a + mid))).max(ev.lower(0.5 * (mid + top.b)));
        heap.push(Arc { a: top.a, b: mid, upper: ev.upper(top.a, mid) });
        heap.push(Arc { a: mid, b: top.b, upper: ev.upper(mid, top.b) });
        arcs += 1;
    }
}

/// `‖P‖_r` for a univariate integer polynomial on the centered disk.
pub fn sup_norm_int(p: &IntPolynomial, r: &Rational, tol: f64) -> Result<Enclosure> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let bp = BallPolynomial::from_int(p, DEFAULT_PREC);
    sup_norm_at_radius(&bp, &ComplexBall::zero(DEFAULT_PREC), r, tol)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BernsteinCheck {
    /// Enclosure of `‖P‖_{r₁} / ‖P‖_{r₀}`.
    pub ratio: Enclosure,
    /// `(r₁/r₀)^d`.
    pub classical_bound: f64,
    /// `ratio.hi ≤ classical_bound · (1 + tol)`.
    pub certified: bool,
}

pub fn bernstein_ratio(p: &IntPolynomial, r0: &Rational, r1: &Rational, tol: f64) -> Result<BernsteinCheck> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(r0.is_positive() && r0 < r1) {
        return Err(Error::InvalidParameter("need 0 < r0 < r1".into()));
    }
    let n0 = sup_norm_int(p, r0, tol / 4.0)?;
    let n1 = sup_norm_int(p, r1, tol / 4.0)?;
    let ratio = n1.div_pos(&n0);
    let d = p.degree().unwrap_or(0) as i32;
    let q = (r1 / r0).to_f64().unwrap();
    let classical_bound = q.powi(d);
    Ok(BernsteinCheck { ratio, classical_bound, certified: ratio.hi <= classical_bound * (1.0 + tol) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn monomials_and_constants() {
        for d in 0..6u32 {
            let mut c = vec![0i64; d as usize + 1];
            c[d as usize] = 1;
            let p = IntPolynomial::from_i64(&c);
            let e = sup_norm_int(&p, &rat(3, 4), 1e-7).unwrap();
            assert!(e.contains(0.75f64.powi(d as i32)));
        }
        let e = sup_norm_int(&IntPolynomial::from_i64(&[-7]), &rat(1, 2), 1e-10).unwrap();
        assert!(e.contains(7.0));
        let e = sup_norm_int(&IntPolynomial::from_i64(&[1, 0, 1]), &int(1), 1e-10).unwrap();
        assert!(e.contains(2.0) && e.width() < 1e-9);
        assert!(matches!(sup_norm_int(&IntPolynomial::zero(1), &int(1), 1e-6), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn bernstein_examples() {
        let p = IntPolynomial::from_i64(&[0, 0, 0, 1]);
        let c = bernstein_ratio(&p, &rat(1, 4), &rat(1, 2), 1e-7).unwrap();
        assert!(c.ratio.contains(8.0) && c.certified);
        let c = bernstein_ratio(&IntPolynomial::from_i64(&[5]), &rat(1, 4), &rat(1, 2), 1e-9).unwrap();
        assert!(c.ratio.contains(1.0));
        let p = IntPolynomial::parse("z^5 - z + 1").unwrap();
        let c = bernstein_ratio(&p, &rat(3, 10), &rat(6, 10), 1e-9).unwrap();
        assert!(c.certified && c.ratio.lo >= 1.0 && c.ratio.hi <= 32.0);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn bernstein_bound_holds(coeffs in proptest::collection::vec(-20i64..20, 1..11),
                                 a in 1i64..99, gap in 1i64..100) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let b = (a + gap).min(100);
            prop_assume!(a < b);
            let p = IntPolynomial::from_i64(&coeffs);
            let tol = 1e-6;
            let c = bernstein_ratio(&p, &rat(a, 100), &rat(b, 100), tol).unwrap();
            prop_assert!(c.ratio.hi <= c.classical_bound * (1.0 + tol), "{:?}", c);
        }
    }
}
