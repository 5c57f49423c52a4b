//! The characteristic `T_f(r₁) = (1/2π)∫ ½·log(1 + Σ|f_i(r₁e^{iθ})|²) dθ`.

use num_traits::ToPrimitive;

use super::map::AnalyticMap;
use crate::arith::enclosure::Enclosure;
use crate::arith::fastball::{horner_ball, F64Ball};
use crate::arith::rational::Rational;
use crate::error::{Error, Result};

pub const DEFAULT_QUAD_TOL: f64 = 1e-9;
pub const MAX_QUAD_POINTS: usize = 1 << 20;

/// Bound on the trapezoidal error with `n` nodes. The integrand
/// `u(θ) = ½·Log(1 + Σ f_i(r₁e^{iθ})·f_i(r₁e^{−iθ}))` (real coefficients)
/// extends to the strip `|Im θ| ≤ σ`; if `|u| ≤ M` there the error is at most
/// `2M/(e^{σn} − 1)`. `M` comes from keeping `Re w ≥ ½` via a derivative bound.
fn trapezoid_error(f: &AnalyticMap, r1: f64, n: usize) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..48 {
        let sigma = 2f64.powi(-k);
        let big_r = r1 * sigma.exp() * (1.0 + 1e-14);
        if f.components.iter().any(|c| big_r >= c.radius()) {
            continue;
        }
        let ks: Vec<f64> = f.components.iter().map(|c| c.sup_bound(big_r)).collect();
        let kd: Vec<f64> = f.components.iter().map(|c| c.derivative_bound(big_r)).collect();
        let slope: f64 = ks.iter().zip(&kd).map(|(a, b)| 2.0 * big_r * a * b).sum::<f64>() * (1.0 + 1e-12);
        if !(sigma * slope <= 0.5) {
            continue;
        }
        let w_max = 1.5 + ks.iter().map(|k| k * k).sum::<f64>();
        let m = 0.5 * (w_max.ln().max(2f64.ln()) + std::f64::consts::FRAC_PI_2) * (1.0 + 1e-12);
        let denom = (sigma * n as f64).exp_m1();
        best = best.min(2.0 * m / denom * (1.0 + 1e-12));
    }
    best
}

fn trapezoid_sum(f: &AnalyticMap, r1: f64, n: usize) -> Enclosure {
    let coeffs: Vec<Vec<F64Ball>> = f.components.iter().map(|c| c.fast_coeffs()).collect();
    let tails: Vec<f64> = f.components.iter().map(|c| c.tail.bound(r1 * (1.0 + 1e-14))).collect();
    let node_rad = r1 * 1e-14;
    let mut acc = Enclosure::point(0.0);
    for j in 0..n {
        let th = std::f64::consts::TAU * j as f64 / n as f64;
        let z = F64Ball::new(r1 * th.cos(), r1 * th.sin(), node_rad);
        let mut lo = 0.0;
        let mut hi = 0.0;
        for (c, t) in coeffs.iter().zip(&tails) {
            let v = horner_ball(c, &z);
            let a = (v.abs_lower() - t).max(0.0);
            let b = v.abs_upper() + t;
            lo += a * a;
            hi += b * b;
        }
        let w = Enclosure::new((1.0 + lo) * (1.0 - 4e-16), (1.0 + hi) * (1.0 + 4e-16));
        acc = acc.add(&w.ln().scale(0.5));
    }
    acc.scale(1.0 / n as f64)
}

pub fn nevanlinna_characteristic(f: &AnalyticMap, r1: &Rational, quadrature_points: usize) -> Result<Enclosure> {
    nevanlinna_characteristic_with(f, r1, quadrature_points, DEFAULT_QUAD_TOL)
}

/// Doubles the node count from `quadrature_points` until the enclosure is
/// narrower than `tol`.
pub fn nevanlinna_characteristic_with(
    f: &AnalyticMap,
    r1: &Rational,
    quadrature_points: usize,
    tol: f64,
) -> Result<Enclosure> {
    let r = r1.to_f64().unwrap_or(f64::INFINITY);
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    if r >= f.validity {
        return Err(Error::RadiusExceeded { r, validity: f.validity });
    }
    if f.components.iter().all(|c| c.is_zero()) {
        return Ok(Enclosure::point(0.0));
    }
    let mut n = quadrature_points.max(4);
    loop {
        let s = trapezoid_sum(f, r, n);
        let e = trapezoid_error(f, r, n);
        let out = Enclosure::new((s.lo - e).max(0.0), s.hi + e);
        if out.width() <= tol {
            return Ok(out);
        }
        if n >= MAX_QUAD_POINTS {
            return Err(Error::QuadratureStall { points: n });
        }
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn examples() {
        let zero = AnalyticMap::parse("0, 0").unwrap();
        assert_eq!(nevanlinna_characteristic(&zero, &rat(1, 2), 16).unwrap(), Enclosure::point(0.0));
        let id = AnalyticMap::parse("z").unwrap();
        let v = nevanlinna_characteristic(&id, &rat(1, 2), 16).unwrap();
        assert!(v.contains(0.5 * 1.25f64.ln()) && v.width() <= DEFAULT_QUAD_TOL);
        let e = AnalyticMap::parse("z, exp(z)").unwrap();
        let v = nevanlinna_characteristic(&e, &rat(3, 4), 16).unwrap();
        assert!(v.width() <= DEFAULT_QUAD_TOL);
        assert!(matches!(nevanlinna_characteristic(&id, &rat(1, 1), 16), Err(Error::RadiusExceeded { .. })));
    }
}
