//! Constructive replay of the interpolation argument bounding sublevel areas.
//!
//! Points `x_0, …, x_{βd}` are picked in the sublevel set with pairwise gap
//! `√(V/(π(βd+1)))`, `f` is interpolated at them, and two inequalities are
//! certified with ball arithmetic: the interpolation remainder
//! `‖f − P‖_{r₀} ≤ C₀·α^{βd+1}·‖f‖_{r₁}` and `‖f‖_{r₀} ≤ 2‖P‖_{r₀}`.
//!
//! The remainder constants come from Hermite's formula
//! `f(z) − P(z) = (1/2πi)∮_{|t|=r₁} ω(z) f(t) / (ω(t)(t − z)) dt`, with
//! `ω = Π(z − x_i)`: `C₀ = r₁/(r₁ − r₀)` and
//! `α^{βd+1} = max_{|z|≤r₀}|ω(z)| / Π(r₁ − |x_i|)`.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::area::{sublevel_area_with, AreaEstimate};
use crate::arith::ball::ComplexBall;
use crate::arith::enclosure::Enclosure;
use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use crate::poly::supnorm::{sup_norm_at_radius, DiskSpec};
use crate::poly::{lagrange_interpolate, BallPolynomial, TruncatedSeries};

#[derive(Debug, Clone)]
pub struct ReplayOptions {
    pub samples: u64,
    pub seed: u64,
    pub prec: u32,
    pub tol: f64,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions { samples: 20_000, seed: 0, prec: 256, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayRecord {
    pub d: u32,
    pub beta: u32,
    pub eps: f64,
    pub area: AreaEstimate,
    pub gap: f64,
    pub points: Vec<(f64, f64)>,
    pub interpolant: BallPolynomial,
    pub f_norm_r0: Enclosure,
    pub f_norm_r1: Enclosure,
    pub p_norm_r0: Enclosure,
    /// Certified upper bound on `‖f − P‖_{r₀}`.
    pub residual: f64,
    pub c0: f64,
    pub alpha: f64,
    /// `C₀·α^{βd+1}·‖f‖_{r₁}`, using the lower end of the norm.
    pub residual_bound: f64,
    /// `(‖f‖_{r₁}/‖f‖_{r₀})^{1/d}`, the smallest `C` with `f ∈ B_C`.
    pub c_effective: f64,
    /// `C₀·C^d·α^{βd+1}` with `C = c_effective`; ≤ 1/2 forces the factor 2.
    pub contraction: f64,
    pub remainder_certified: bool,
    pub factor_two_certified: bool,
}

fn radii(disk: &DiskSpec) -> Result<(Rational, Rational)> {
    match (&disk.r0, &disk.r1) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::InvalidParameter("replay needs reference radii r0 < r1".into())),
    }
}

/// Sum of coefficient magnitudes weighted by `r^k`: a bound on `‖g‖_r`.
fn coefficient_bound(g: &BallPolynomial, r: f64) -> f64 {
    let mut s = 0.0;
    let mut rk = 1.0;
    for c in &g.coeffs {
        s += c.abs_upper().to_f64_bounds().1 * rk;
        rk *= r;
    }
    s * (1.0 + 1e-12)
}

pub fn replay_interpolation_argument(
    f: &TruncatedSeries,
    disk: &DiskSpec,
    eps: f64,
    beta: u32,
    d: u32,
    opts: &ReplayOptions,
) -> Result<ReplayRecord> {
    let (r0q, r1q) = radii(disk)?;
    let (r0, r1) = (r0q.to_f64().unwrap(), r1q.to_f64().unwrap());
    if beta == 0 || d == 0 {
        return Err(Error::InvalidParameter("β and d must be positive".into()));
    }
    let n = (beta * d) as usize + 1;
    let f_r0 = f.sup_norm(&r0q, opts.tol)?;
    let f_r1 = f.sup_norm(&r1q, opts.tol)?;
    let mut inside = Vec::new();
    let area = sublevel_area_with(|z| f.eval_fast(z), &f_r0, r0, eps, opts.samples, opts.seed, |x, y| {
        inside.push((x, y))
    })?;
    if inside.is_empty() {
        return Err(Error::SublevelEmpty);
    }
    let gap = (area.estimate / (std::f64::consts::PI * n as f64)).sqrt();
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(n);
    for &(x, y) in &inside {
        if points.iter().all(|&(a, b)| (x - a).hypot(y - b) >= gap) {
            points.push((x, y));
            if points.len() == n {
                break;
            }
        }
    }
    if points.len() < n {
        return Err(Error::SeparationFailed { needed: n, placed: points.len(), gap });
    }
    let prec = opts.prec;
    let nodes: Vec<ComplexBall> = points.iter().map(|&(x, y)| ComplexBall::from_f64(x, y, 0.0, prec)).collect();
    let values: Vec<ComplexBall> = nodes.iter().map(|z| f.eval_ball(z)).collect();
    let p = lagrange_interpolate(&nodes, &values)?;

    let diff = f.poly.sub(&p);
    let residual = coefficient_bound(&diff, r0) + f.tail;
    let p_r0 = sup_norm_at_radius(&p, &ComplexBall::zero(prec), &r0q, opts.tol)?;

    let mut omega = BallPolynomial::new(vec![ComplexBall::from_i64(1, prec)]);
    for z in &nodes {
        omega = omega.mul(&BallPolynomial::new(vec![z.neg(), ComplexBall::from_i64(1, prec)]));
    }
    let omega_max = sup_norm_at_radius(&omega, &ComplexBall::zero(prec), &r0q, opts.tol)?.hi;
    let mut omega_min = 1.0f64;
    for &(x, y) in &points {
        omega_min *= (r1 - x.hypot(y) * (1.0 + 2.0 * f64::EPSILON)) * (1.0 - 2.0 * f64::EPSILON);
    }
    let c0 = r1 / (r1 - r0) * (1.0 + 4.0 * f64::EPSILON);
    let ratio = omega_max / omega_min;
    let alpha = ratio.powf(1.0 / n as f64);
    let residual_bound = c0 * ratio * f_r1.lo;
    let c_effective = (f_r1.hi / f_r0.lo).powf(1.0 / d as f64);
    let contraction = c0 * ratio * f_r1.hi / f_r0.lo;
    let remainder_certified = residual <= residual_bound;
    let factor_two_certified = f_r0.hi <= 2.0 * p_r0.lo;
    let rec = ReplayRecord {
        d,
        beta,
        eps,
        area,
        gap,
        points,
        interpolant: p,
        f_norm_r0: f_r0,
        f_norm_r1: f_r1,
        p_norm_r0: p_r0,
        residual,
        c0,
        alpha,
        residual_bound,
        c_effective,
        contraction,
        remainder_certified,
        factor_two_certified,
    };
    if !rec.remainder_certified {
        return Err(Error::CertificateViolated(format!(
            "‖f − P‖ ≤ {:e} exceeds C₀α^(βd+1)‖f‖ = {:e}",
            rec.residual, rec.residual_bound
        )));
    }
    if !rec.factor_two_certified {
        return Err(Error::CertificateViolated(format!(
            "‖f‖_r0 ≤ {:e} but 2‖P‖_r0 ≥ {:e} only",
            rec.f_norm_r0.hi,
            2.0 * rec.p_norm_r0.lo
        )));
    }
    Ok(rec)
}

/// Re-evaluation of a record's two inequalities at `prec` bits, independent
/// of the values stored in it.
pub fn recheck_replay(f: &TruncatedSeries, disk: &DiskSpec, rec: &ReplayRecord, prec: u32) -> Result<(bool, bool)> {
    let (r0q, r1q) = radii(disk)?;
    let r0 = r0q.to_f64().unwrap();
    let nodes: Vec<ComplexBall> = rec.points.iter().map(|&(x, y)| ComplexBall::from_f64(x, y, 0.0, prec)).collect();
    let values: Vec<ComplexBall> = nodes.iter().map(|z| f.eval_ball(&z.with_prec(prec))).collect();
    let p = lagrange_interpolate(&nodes, &values)?;
    let residual = coefficient_bound(&f.poly.sub(&p), r0) + f.tail;
    let tol = 1e-9;
    let f_r0 = f.sup_norm(&r0q, tol)?;
    let f_r1 = f.sup_norm(&r1q, tol)?;
    let p_r0 = sup_norm_at_radius(&p, &ComplexBall::zero(prec), &r0q, tol)?;
    let bound = rec.c0 * rec.alpha.powi(rec.points.len() as i32) * f_r1.lo;
    Ok((residual <= bound * (1.0 + 1e-9), f_r0.hi <= 2.0 * p_r0.lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::measure::bounds::select_beta;

    fn disk() -> DiskSpec {
        DiskSpec::with_reference(rat(3, 10), rat(6, 10)).unwrap()
    }

    #[test]
    fn low_degree_polynomial_is_reproduced() {
        let f = TruncatedSeries::polynomial(BallPolynomial::from_ints(
            &[3, -1, 0, 2].map(num_bigint::BigInt::from),
            256,
        ));
        let rec = replay_interpolation_argument(&f, &disk(), 0.9, 1, 3, &ReplayOptions::default()).unwrap();
        assert_eq!(rec.points.len(), 4);
        assert!(rec.residual < 1e-40, "{}", rec.residual);
        assert!(rec.factor_two_certified);
    }

    #[test]
    fn truncated_exponential() {
        let f = TruncatedSeries::exp(20, 0.6, 256).unwrap();
        let f = TruncatedSeries::new(f.poly, 1e-15, 0.6).unwrap();
        // constants of the remainder bound for nodes at the center
        let beta = select_beta(2.0, 1.0, 0.3f64.exp(), 0.5).unwrap();
        let rec = replay_interpolation_argument(&f, &disk(), 0.95, beta, 1, &ReplayOptions::default()).unwrap();
        assert_eq!(rec.points.len() as u32, beta + 1);
        assert!(rec.remainder_certified && rec.factor_two_certified);
        assert_eq!(recheck_replay(&f, &disk(), &rec, 512).unwrap(), (true, true));
    }

    #[test]
    fn empty_sublevel_set() {
        let f = TruncatedSeries::exp(20, 0.6, 256).unwrap();
        // |exp z| ≥ e^{-0.3} on Δ_{0.3}, so ε < e^{-0.6} leaves nothing
        let e = replay_interpolation_argument(&f, &disk(), 0.5, 1, 1, &ReplayOptions::default());
        assert!(matches!(e, Err(Error::SublevelEmpty)));
    }
}
