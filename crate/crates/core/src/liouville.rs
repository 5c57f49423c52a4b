//! Exhaustive checks of the Liouville inequality
//! `log|P(p)| ≥ −A (log‖P‖ + deg P)` with `A = [K(p):Q]·h(p)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::algebraic::{AlgebraicNumber, Precision};
use crate::arith::ball::ComplexBall;
use crate::arith::enclosure::Enclosure;
use crate::arith::height::{weil_height_with, Coord, HeightOptions, ProjectivePoint};
use crate::arith::rational::Rational;
use crate::arith::upoly;
use crate::arith::zero::is_exact_zero_with;
use crate::error::{Error, Result};
use crate::poly::enumerate::{PolyEnumerator, DEFAULT_BUDGET};
use crate::poly::IntPolynomial;

const MAX_LISTED: usize = 25;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub polynomial: String,
    pub degree: u32,
    pub norm: String,
    /// Enclosure of `log|P(p)|`.
    pub log_value: Enclosure,
    /// `−A (log‖P‖ + d)` at the midpoint of `A`.
    pub bound: f64,
    /// The resultant bound `−d·D·h + d·log⁺|α| − (D−1)·log((d+1)‖P‖)` (univariate points).
    pub resultant_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiouvilleReport {
    pub point: String,
    pub field_degree: usize,
    pub height: Enclosure,
    /// `A = [K(p):Q]·h(p)`.
    pub constant: Enclosure,
    pub d_max: u32,
    pub h_max: u64,
    /// Polynomials with `P(p) ≠ 0` covered by the check.
    pub checked: u64,
    pub vanishing_count: u64,
    pub vanishing: Vec<String>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    /// Polynomials meeting the bound with equality to working precision.
    pub boundary_count: u64,
    pub boundary: Vec<String>,
    /// Violations of the resultant bound (expected to be zero).
    pub resultant_violation_count: u64,
    /// Smallest observed `log|P(p)| + A(log‖P‖ + d)`.
    pub worst_margin: Option<f64>,
    pub worst: Option<Violation>,
    pub pass: bool,
}

/// Affine coordinates `x_i / x_0` of a point with rational nonzero `x_0`.
pub fn affine_coordinates(p: &ProjectivePoint) -> Result<Vec<AlgebraicNumber>> {
    let x0 = match &p.coords()[0] {
        Coord::Rational(q) if !q.is_zero() => q.clone(),
        _ => {
            return Err(Error::UnsupportedPoint("the first coordinate must be a nonzero rational".into()));
        }
    };
    let inv = Rational::from_integer(1.into()) / x0;
    Ok(p.coords()[1..]
        .iter()
        .map(|c| match c {
            Coord::Rational(q) => AlgebraicNumber::from_rational(&(q * &inv)),
            Coord::Algebraic(a) => a.scale(&inv),
        })
        .collect())
}

/// Points whose height is exactly zero, where the bound reads `|P(α)| ≥ 1`
/// and equality must be decided exactly.
#[derive(Debug, Clone)]
enum ZeroHeight {
    No,
    Rational(Rational),
    RootOfUnity,
}

struct Context {
    zero_height: ZeroHeight,
    alpha: AlgebraicNumber,
    a: Enclosure,
    d_field: usize,
    h: Enclosure,
    log_plus_alpha: f64,
    precision: Precision,
    cyclotomic: Vec<i128>,
}

impl Context {
    fn resultant_bound(&self, d: u32, log_norm: f64) -> f64 {
        let d = d as f64;
        -d * self.d_field as f64 * self.h.mid() + d * self.log_plus_alpha
            - (self.d_field as f64 - 1.0) * ((d + 1.0).ln() + log_norm)
    }
}

enum Outcome {
    Zero,
    Pass(f64),
    /// `log|P(p)|` lies inside the bound's own uncertainty, which comes
    /// from the height enclosure; the non-strict inequality is taken to
    /// hold with equality.
    Boundary(String),
    Violation(Violation),
}

/// Remainder of `q` modulo the monic polynomial `f`.
fn rem_monic(mut q: Vec<i128>, f: &[i128]) -> Vec<i128> {
    let m = f.len() - 1;
    while q.len() > m {
        let top = q.pop().unwrap();
        if top != 0 {
            let shift = q.len() - m;
            for (k, fk) in f[..m].iter().enumerate() {
                q[shift + k] -= top * fk;
            }
        }
    }
    q
}

/// Exact arithmetic in `Z[ζ]` for a root of unity `ζ` with minimal
/// polynomial `f`: returns whether `P(ζ) = 0` and whether `|P(ζ)| = 1`,
/// the latter via `P(z)·z^d P(1/z) − z^d ≡ 0 mod f`.
fn root_of_unity_class(c: &[i64], f: &[i128]) -> (bool, bool) {
    let d = c.iter().rposition(|&x| x != 0).unwrap_or(0);
    let c: Vec<i128> = c[..=d].iter().map(|&x| x as i128).collect();
    if rem_monic(c.clone(), f).iter().all(|&x| x == 0) {
        return (true, false);
    }
    let mut q = vec![0i128; 2 * d + 1];
    for (i, a) in c.iter().enumerate() {
        for (j, b) in c.iter().rev().enumerate() {
            q[i + j] += a * b;
        }
    }
    q[d] -= 1;
    (false, rem_monic(q, f).iter().all(|&x| x == 0))
}

/// Rigorous evaluation of one candidate.
fn certify(ctx: &Context, coeffs: &[i64]) -> Result<Outcome> {
    let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
    let c = upoly::trim(c);
    let d = upoly::degree(&c).unwrap_or(0) as u32;
    let norm = c.iter().map(|x| x.magnitude().clone()).max().unwrap();
    let norm_i = BigInt::from(norm.clone());
    let (log_norm_lo, log_norm_hi) = crate::arith::dyadic::Dyadic::from_int(norm_i).ln_bounds();
    let s_lo = log_norm_lo + d as f64;
    let s_hi = log_norm_hi + d as f64;
    let violation = |lv: Enclosure| {
        Outcome::Violation(Violation {
            polynomial: IntPolynomial::univariate(&c).to_string(),
            degree: d,
            norm: norm.to_string(),
            log_value: lv,
            bound: -ctx.a.mid() * (log_norm_hi + d as f64),
            resultant_bound: Some(ctx.resultant_bound(d, log_norm_hi)),
        })
    };
    match &ctx.zero_height {
        ZeroHeight::Rational(q) => {
            let v = upoly::eval_rational(&c, q);
            if v.is_zero() {
                return Ok(Outcome::Zero);
            }
            let lv = ComplexBall::from_rational(&v, 128).ln_abs()?;
            let one = Rational::from_integer(1.into());
            return Ok(if num_traits::Signed::abs(&v) >= one { Outcome::Pass(lv.mid()) } else { violation(lv) });
        }
        ZeroHeight::RootOfUnity => match root_of_unity_class(coeffs, &ctx.cyclotomic) {
            (true, _) => return Ok(Outcome::Zero),
            (false, true) => return Ok(Outcome::Pass(0.0)),
            _ => {}
        },
        _ => {}
    }
    for bits in ctx.precision.schedule() {
        let alpha = ctx.alpha.refine(bits)?;
        let v = upoly::eval_ball(&c, alpha.ball());
        if v.contains_zero() {
            let f: Vec<Rational> = alpha.minpoly().iter().map(|x| Rational::from_integer(x.clone())).collect();
            let q: Vec<Rational> = c.iter().map(|x| Rational::from_integer(x.clone())).collect();
            if upoly::divides_q(&f, &q) {
                return Ok(Outcome::Zero);
            }
            continue;
        }
        let lv = v.ln_abs()?;
        // pass: log|P| ≥ −A_lo·s ≥ −A·s; fail: log|P| < −A_hi·s
        let pass_threshold = -(ctx.a.lo * s_lo).max(ctx.a.lo * s_hi);
        let fail_threshold = -(ctx.a.hi * s_hi);
        if lv.lo >= pass_threshold {
            return Ok(Outcome::Pass(lv.mid() + ctx.a.mid() * (log_norm_hi + d as f64)));
        }
        if lv.hi < fail_threshold {
            return Ok(violation(lv));
        }
        if lv.width() < 1e-14 {
            return Ok(Outcome::Boundary(IntPolynomial::univariate(&c).to_string()));
        }
    }
    Err(Error::PrecisionExhausted { bits: ctx.precision.ceiling })
}

/// Exhaustive check over every `P` with `deg P ≤ d_max`, `‖P‖ ≤ h_max`.
pub fn liouville_verify(point: &ProjectivePoint, d_max: u32, h_max: u64) -> Result<LiouvilleReport> {
    liouville_verify_with(point, d_max, h_max, &HeightOptions::default())
}

pub fn liouville_verify_with(point: &ProjectivePoint, d_max: u32, h_max: u64, opts: &HeightOptions) -> Result<LiouvilleReport> {
    if h_max == 0 {
        return Err(Error::InvalidParameter("h_max must be at least 1".into()));
    }
    let h = weil_height_with(point, opts)?;
    let d_field = point.field_degree(opts)?;
    let a = h.scale(d_field as f64);
    let affine = affine_coordinates(point)?;
    if affine.len() == 1 {
        verify_univariate(point, affine.into_iter().next().unwrap(), d_field, h, a, d_max, h_max, opts)
    } else {
        verify_general(point, &affine, d_field, h, a, d_max, h_max, opts)
    }
}

struct Tally {
    boundary: Vec<String>,
    boundary_count: u64,
    vanishing: Vec<String>,
    vanishing_count: u64,
    violations: Vec<Violation>,
    violation_count: u64,
    resultant_violations: u64,
    worst_margin: Option<f64>,
    worst: Option<Violation>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            boundary: vec![],
            boundary_count: 0,
            vanishing: vec![],
            vanishing_count: 0,
            violations: vec![],
            violation_count: 0,
            resultant_violations: 0,
            worst_margin: None,
            worst: None,
        }
    }

    fn record(&mut self, o: Outcome, describe: impl FnOnce() -> (String, Violation)) {
        match o {
            Outcome::Zero => {
                self.vanishing_count += 1;
                if self.vanishing.len() < MAX_LISTED {
                    self.vanishing.push(describe().0);
                }
            }
            Outcome::Boundary(p) => {
                self.boundary_count += 1;
                if self.boundary.len() < MAX_LISTED {
                    self.boundary.push(p);
                }
            }
            Outcome::Pass(margin) => {
                if self.worst_margin.map_or(true, |w| margin < w) {
                    self.worst_margin = Some(margin);
                    self.worst = Some(describe().1);
                }
            }
            Outcome::Violation(v) => {
                let margin = v.log_value.mid() - v.bound;
                if self.worst_margin.map_or(true, |w| margin < w) {
                    self.worst_margin = Some(margin);
                    self.worst = Some(v.clone());
                }
                if v.resultant_bound.is_some_and(|rb| v.log_value.hi < rb) {
                    self.resultant_violations += 1;
                }
                self.violation_count += 1;
                if self.violations.len() < MAX_LISTED {
                    self.violations.push(v);
                }
            }
        }
    }

    /// Counts a violation decided in floating point, building the record
    /// only when it is listed or becomes the worst case.
    fn record_violation(&mut self, margin: f64, below_resultant: bool, make: impl FnOnce() -> Violation) {
        self.violation_count += 1;
        if below_resultant {
            self.resultant_violations += 1;
        }
        let worst = self.worst_margin.map_or(true, |w| margin < w);
        if worst || self.violations.len() < MAX_LISTED {
            let v = make();
            if worst {
                self.worst_margin = Some(margin);
                self.worst = Some(v.clone());
            }
            if self.violations.len() < MAX_LISTED {
                self.violations.push(v);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(self, point: &ProjectivePoint, d_field: usize, h: Enclosure, a: Enclosure, d_max: u32, h_max: u64, total: u64) -> LiouvilleReport {
        LiouvilleReport {
            point: point.to_string(),
            field_degree: d_field,
            height: h,
            constant: a,
            d_max,
            h_max,
            checked: total - self.vanishing_count,
            pass: self.violation_count == 0,
            vanishing_count: self.vanishing_count,
            vanishing: self.vanishing,
            violation_count: self.violation_count,
            violations: self.violations,
            boundary_count: self.boundary_count,
            boundary: self.boundary,
            resultant_violation_count: self.resultant_violations,
            worst_margin: self.worst_margin,
            worst: self.worst,
        }
    }
}

fn describe_poly(coeffs: &[i64], ctx: &Context) -> (String, Violation) {
    let v = upoly::eval_ball(&upoly::from_i64(coeffs), ctx.alpha.ball());
    let lv = v.ln_abs().unwrap_or(Enclosure::new(f64::NEG_INFINITY, f64::INFINITY));
    let viol = violation_of(coeffs, ctx, lv);
    (viol.polynomial.clone(), viol)
}

fn violation_of(coeffs: &[i64], ctx: &Context, lv: Enclosure) -> Violation {
    let p = IntPolynomial::from_i64(coeffs);
    let d = p.degree().unwrap_or(0);
    let ln = p.log_norm();
    Violation {
        polynomial: p.to_string(),
        degree: d,
        norm: p.norm().to_string(),
        log_value: lv,
        bound: -ctx.a.mid() * (ln + d as f64),
        resultant_bound: Some(ctx.resultant_bound(d, ln)),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_univariate(
    point: &ProjectivePoint,
    alpha: AlgebraicNumber,
    d_field: usize,
    h: Enclosure,
    a: Enclosure,
    d_max: u32,
    h_max: u64,
    opts: &HeightOptions,
) -> Result<LiouvilleReport> {
    let (re, im) = alpha.ball().mid_f64();
    let z = Complex64::new(re, im);
    let zero_height = match alpha.as_rational() {
        Some(q) if q.numer().magnitude() <= &1u32.into() && q.denom().magnitude() <= &1u32.into() => {
            ZeroHeight::Rational(q)
        }
        _ if upoly::cyclotomic_index(alpha.minpoly()).is_some() => ZeroHeight::RootOfUnity,
        _ => ZeroHeight::No,
    };
    // h = 0 exactly at 0, ±1 and roots of unity (Kronecker)
    let (h, a) = match zero_height {
        ZeroHeight::No => (h, a),
        _ => (Enclosure::point(0.0), Enclosure::point(0.0)),
    };
    let cyclotomic = match zero_height {
        ZeroHeight::RootOfUnity => alpha.minpoly().iter().map(|x| i128::try_from(x).unwrap()).collect(),
        _ => vec![],
    };
    let ctx = Context {
        zero_height,
        log_plus_alpha: z.norm().ln().max(0.0),
        alpha,
        a,
        d_field,
        h,
        precision: opts.precision,
        cyclotomic,
    };
    let n = d_max as usize;
    let hm = h_max as i64;
    let total = ((2 * h_max + 1) as f64).powi(n as i32 + 1) as u64 - 1;
    let mut tally = Tally::new();
    let pows: Vec<Complex64> = (0..=n).map(|k| z.powi(k as i32)).collect();
    let abs_pows: Vec<f64> = pows.iter().map(|p| p.norm()).collect();
    let mut coeffs = vec![0i64; n + 1];
    if n == 0 {
        return Ok(tally.finish(point, d_field, h, a, d_max, h_max, total));
    }
    // odometer over (c_1, …, c_n); c_0 is solved for
    for slot in coeffs.iter_mut().skip(1) {
        *slot = -hm;
    }
    loop {
        if coeffs[1..].iter().any(|&c| c != 0) {
            let mut v = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for k in 1..=n {
                let c = coeffs[k] as f64;
                v += pows[k] * c;
                mag += c.abs() * abs_pows[k];
            }
            // generous bound on the float error of v
            let delta = 1e-12 * (1.0 + mag);
            if v.im.abs() < 1.0 + delta {
                let lo = (-v.re - 1.0 - delta).ceil().max(-hm as f64) as i64;
                let hi = (-v.re + 1.0 + delta).floor().min(hm as f64) as i64;
                for c0 in lo..=hi {
                    let val = Complex64::new(v.re + c0 as f64, v.im).norm();
                    if val >= 1.0 + delta {
                        continue;
                    }
                    coeffs[0] = c0;
                    let d = (1..=n).rev().find(|&k| coeffs[k] != 0).unwrap() as f64;
                    let norm = coeffs.iter().map(|c| c.abs()).max().unwrap() as f64;
                    let s = norm.ln() + d;
                    let margin = (val.max(1e-300)).ln() + a.lo * s;
                    let rb_margin = (val.max(1e-300)).ln() - ctx.resultant_bound(d as u32, norm.ln());
                    let nonzero = val > 4.0 * delta;
                    let clear_fail = ((val + delta).ln() + a.hi * s) < -1e-6 && rb_margin.abs() > 1e-6;
                    if nonzero && margin > 1e-6 && rb_margin > 1e-6 {
                        if tally.worst_margin.map_or(true, |w| margin < w) {
                            tally.record(Outcome::Pass(margin), || describe_poly(&coeffs, &ctx));
                        }
                    } else if nonzero && clear_fail {
                        let lv = Enclosure::new((val - delta).ln() - 1e-15, (val + delta).ln() + 1e-15);
                        tally.record_violation(margin, rb_margin < 0.0, || violation_of(&coeffs, &ctx, lv));
                    } else {
                        let o = certify(&ctx, &coeffs)?;
                        tally.record(o, || describe_poly(&coeffs, &ctx));
                    }
                    coeffs[0] = 0;
                }
            }
        }
        // advance odometer
        let mut k = 1;
        loop {
            if k > n {
                return Ok(tally.finish(point, d_field, h, a, d_max, h_max, total));
            }
            if coeffs[k] < hm {
                coeffs[k] += 1;
                break;
            }
            coeffs[k] = -hm;
            k += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_general(
    point: &ProjectivePoint,
    z: &[AlgebraicNumber],
    d_field: usize,
    h: Enclosure,
    a: Enclosure,
    d_max: u32,
    h_max: u64,
    opts: &HeightOptions,
) -> Result<LiouvilleReport> {
    let mut e = PolyEnumerator::new(z.len(), d_max, h_max, DEFAULT_BUDGET)?;
    let total = e.raw_len() - 1;
    let mut tally = Tally::new();
    let balls: Vec<ComplexBall> = z.iter().map(|x| x.ball().clone()).collect();
    while let Some((k, _)) = e.next_coefficients() {
        let p = e.polynomial_of(k);
        let d = p.degree().unwrap();
        let ln = p.log_norm();
        let v = p.eval_ball(&balls)?;
        let s = ln + d as f64;
        if v.contains_zero() {
            if is_exact_zero_with(&p, z, opts.precision, opts.degree_cap)? {
                tally.record(Outcome::Zero, || (p.to_string(), dummy_violation(&p)));
                continue;
            }
            return Err(Error::PossiblyZero);
        }
        let lv = v.ln_abs()?;
        let o = if lv.lo >= -(a.lo * s) {
            Outcome::Pass(lv.mid() + a.mid() * s)
        } else if lv.hi < -(a.hi * s) {
            Outcome::Violation(Violation {
                polynomial: p.to_string(),
                degree: d,
                norm: p.norm().to_string(),
                log_value: lv,
                bound: -a.mid() * s,
                resultant_bound: None,
            })
        } else {
            return Err(Error::PrecisionExhausted { bits: balls[0].prec() });
        };
        tally.record(o, || (p.to_string(), dummy_violation(&p)));
    }
    Ok(tally.finish(point, d_field, h, a, d_max, h_max, total))
}

fn dummy_violation(p: &IntPolynomial) -> Violation {
    Violation {
        polynomial: p.to_string(),
        degree: p.degree().unwrap_or(0),
        norm: p.norm().to_string(),
        log_value: Enclosure::point(f64::NAN),
        bound: f64::NAN,
        resultant_bound: None,
    }
}

/// The ten reference points of the exhaustive check, degrees 1 to 4.
pub fn reference_points() -> Vec<(&'static str, ProjectivePoint)> {
    let specs = [
        ("[2:3]", "[2:3]"),
        ("golden ratio", "[1:root(-1,-1,1;1.618)]"),
        ("2^(1/3)", "[1:root(-2,0,0,1;1.26)]"),
        ("2^(1/4)", "[1:root(-2,0,0,0,1;1.189)]"),
        ("sqrt 2", "[1:root(-2,0,1;1.414)]"),
        ("sqrt 3 / 2", "[1:root(-3,0,4;0.866)]"),
        ("i", "[1:root(1,0,1;0,1)]"),
        ("zeta_5", "[1:root(1,1,1,1,1;0.309,0.951)]"),
        ("plastic number", "[1:root(-1,-1,0,1;1.3247)]"),
        ("sqrt 2 + sqrt 3", "[1:root(1,0,-10,0,1;3.146)]"),
    ];
    specs.iter().map(|(n, s)| (*n, ProjectivePoint::parse(s).expect("valid reference point"))).collect()
}

/// `‖P‖` as `f64` (saturating).
pub fn norm_f64(p: &IntPolynomial) -> f64 {
    p.norm().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_point_passes() {
        let p = ProjectivePoint::parse("[2:3]").unwrap();
        let r = liouville_verify(&p, 3, 6).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert!(r.vanishing_count > 0);
        assert_eq!(r.checked + r.vanishing_count, 13u64.pow(4) - 1);
    }

    #[test]
    fn vanishing_polynomials_are_skipped() {
        let p = ProjectivePoint::parse("[1:root(-2,0,1;1.414)]").unwrap();
        let r = liouville_verify(&p, 2, 2).unwrap();
        // the multiples of z² − 2 with ‖P‖ ≤ 2 are ±(z² − 2)
        assert_eq!(r.vanishing_count, 2);
        assert_eq!(r.resultant_violation_count, 0);
    }

    #[test]
    fn golden_ratio_counterexample() {
        let p = ProjectivePoint::parse("[1:root(-1,-1,1;1.618)]").unwrap();
        let r = liouville_verify(&p, 1, 13).unwrap();
        assert!(!r.pass);
        assert!(r.violations.iter().any(|v| v.polynomial == "8*z - 13"));
        // |φ − 1| = 1/φ meets the bound with equality
        assert!(r.boundary.iter().any(|p| p == "z - 1"));
        assert_eq!(r.resultant_violation_count, 0);
    }

    #[test]
    fn unit_values_at_roots_of_unity_pass() {
        let p = ProjectivePoint::parse("[1:root(1,0,1;0,1)]").unwrap();
        let r = liouville_verify(&p, 3, 2).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert!(r.vanishing_count > 0);
        let one = ProjectivePoint::parse("[1:1]").unwrap();
        assert!(liouville_verify(&one, 3, 2).unwrap().pass);
    }
}
