//! Area of sublevel sets `{z ∈ Δ_r : |f(z)| ≤ ε‖f‖_r}`.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::ball::ComplexBall;
use crate::arith::enclosure::Enclosure;
use crate::arith::fastball::{horner_ball, F64Ball};
use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use crate::poly::intpoly::int_to_f64ball;
use crate::poly::supnorm::{sup_norm_int, DEFAULT_TOL};
use crate::poly::IntPolynomial;

pub const MIN_SAMPLES: u64 = 1000;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;
const SHARD: u64 = 1 << 16;
const MAX_AMBIGUOUS: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreaMethod {
    MonteCarlo,
    GridQuadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub estimate: f64,
    /// Half-width of the 99% Wilson score interval, scaled to area.
    pub confidence_radius: f64,
    pub samples: u64,
    /// Samples whose classification straddled the threshold; excluded.
    pub ambiguous: u64,
    pub seed: u64,
    pub method: AreaMethod,
}

/// Half-width of the 99% Wilson interval around `k/n`, measured from `k/n`.
pub fn wilson_radius(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z99 * Z99;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z99 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center + half) - p).max(p - (center - half)).max(0.0)
}

/// Classification of one sample against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Inside,
    Outside,
    Ambiguous,
}

pub(crate) fn classify(v: &F64Ball, threshold: &Enclosure) -> Side {
    if v.abs_upper() <= threshold.lo {
        Side::Inside
    } else if v.abs_lower() > threshold.hi {
        Side::Outside
    } else {
        Side::Ambiguous
    }
}

pub(crate) struct SampleRun {
    pub inside: u64,
    pub outside: u64,
    pub ambiguous: Vec<(f64, f64)>,
}

/// Uniform samples in `Δ_r` by rejection from the bounding square; shard `s`
/// draws from ChaCha stream `s` of the seed so every sample index is fixed.
pub(crate) fn sample_disk(
    r: f64,
    samples: u64,
    seed: u64,
    mut visit: impl FnMut(f64, f64) -> Side,
) -> SampleRun {
    let mut run = SampleRun { inside: 0, outside: 0, ambiguous: vec![] };
    let shards = samples.div_ceil(SHARD);
    for shard in 0..shards {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shard);
        let count = SHARD.min(samples - shard * SHARD);
        let mut done = 0;
        while done < count {
            let x = r * (2.0 * rng.gen::<f64>() - 1.0);
            let y = r * (2.0 * rng.gen::<f64>() - 1.0);
            if x * x + y * y >= r * r {
                continue;
            }
            done += 1;
            match visit(x, y) {
                Side::Inside => run.inside += 1,
                Side::Outside => run.outside += 1,
                Side::Ambiguous => run.ambiguous.push((x, y)),
            }
        }
    }
    run
}

fn threshold_of(norm: &Enclosure, eps: f64) -> Enclosure {
    let u = f64::EPSILON;
    Enclosure::new(eps * norm.lo * (1.0 - 2.0 * u), eps * norm.hi * (1.0 + 2.0 * u))
}

fn finish(run: &SampleRun, r: f64, samples: u64, seed: u64) -> Result<AreaEstimate> {
    let amb = run.ambiguous.len() as u64;
    if amb as f64 >= MAX_AMBIGUOUS * samples as f64 {
        return Err(Error::AmbiguityOverflow { ambiguous: amb, total: samples });
    }
    let area = std::f64::consts::PI * r * r;
    let n = samples - amb;
    Ok(AreaEstimate {
        estimate: area * run.inside as f64 / n as f64,
        confidence_radius: area * wilson_radius(run.inside, n),
        samples,
        ambiguous: amb,
        seed,
        method: AreaMethod::MonteCarlo,
    })
}

fn check_params(eps: f64, samples: u64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter("ε must lie in (0, 1]".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("at least {MIN_SAMPLES} samples required")));
    }
    Ok(())
}

/// Monte-Carlo estimate of `μ{z ∈ Δ_r : |P(z)| ≤ ε‖P‖_r}`.
pub fn small_value_area(p: &IntPolynomial, r: &Rational, eps: f64, samples: u64, seed: u64) -> Result<AreaEstimate> {
    check_params(eps, samples)?;
    let coeffs = p.to_univariate().ok_or(Error::ArityMismatch { expected: 1, got: p.arity() })?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let rf = r.to_f64().filter(|x| *x > 0.0).ok_or(Error::InvalidParameter("radius must be positive".into()))?;
    let fast: Vec<F64Ball> = coeffs.iter().map(int_to_f64ball).collect();
    let norm = sup_norm_int(p, r, DEFAULT_TOL)?;
    let t = threshold_of(&norm, eps);
    let mut run = sample_disk(rf, samples, seed, |x, y| classify(&horner_ball(&fast, &F64Ball::exact(x, y)), &t));
    if run.ambiguous.len() as f64 >= MAX_AMBIGUOUS * samples as f64 {
        // tighter norm, then multiprecision evaluation of the ambiguous samples
        let norm = sup_norm_int(p, r, 1e-11)?;
        let t = threshold_of(&norm, eps);
        let pending = std::mem::take(&mut run.ambiguous);
        for (x, y) in pending {
            let z = ComplexBall::from_f64(x, y, 0.0, 192);
            let v = p.eval_ball(&[z])?.to_f64_ball();
            match classify(&v, &t) {
                Side::Inside => run.inside += 1,
                Side::Outside => run.outside += 1,
                Side::Ambiguous => run.ambiguous.push((x, y)),
            }
        }
    }
    finish(&run, rf, samples, seed)
}

/// Same sublevel area for a function given by an evaluator and a norm
/// enclosure `‖f‖_r`.
pub(crate) fn sublevel_area_with(
    eval: impl Fn(&F64Ball) -> F64Ball,
    norm: &Enclosure,
    r: f64,
    eps: f64,
    samples: u64,
    seed: u64,
    mut on_inside: impl FnMut(f64, f64),
) -> Result<AreaEstimate> {
    check_params(eps, samples)?;
    let t = threshold_of(norm, eps);
    let run = sample_disk(r, samples, seed, |x, y| {
        let s = classify(&eval(&F64Ball::exact(x, y)), &t);
        if s == Side::Inside {
            on_inside(x, y);
        }
        s
    });
    finish(&run, r, samples, seed)
}

/// Midpoint-rule area on an `n × n` grid over the bounding square. The
/// radius counts cells whose classification could change within the cell.
pub fn grid_quadrature_area(p: &IntPolynomial, r: &Rational, eps: f64, n: u32) -> Result<AreaEstimate> {
    check_params(eps, MIN_SAMPLES)?;
    let coeffs: Vec<f64> = crate::poly::intpoly::approx_coeffs(p);
    let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    let rf = r.to_f64().filter(|x| *x > 0.0).ok_or(Error::InvalidParameter("radius must be positive".into()))?;
    let t = eps * sup_norm_int(p, r, DEFAULT_TOL)?.mid();
    let h = 2.0 * rf / n as f64;
    let reach = h * std::f64::consts::FRAC_1_SQRT_2;
    let (mut inside, mut uncertain) = (0u64, 0u64);
    for i in 0..n {
        let x = -rf + (i as f64 + 0.5) * h;
        for j in 0..n {
            let y = -rf + (j as f64 + 0.5) * h;
            let m = x.hypot(y);
            if m >= rf + reach {
                continue;
            }
            let z = num_complex::Complex64::new(x, y);
            let v = coeffs.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |a, &c| a * z + c).norm();
            let dv = deriv.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |a, &c| a * z + c).norm();
            if (m - rf).abs() < reach || (v - t).abs() <= dv * reach * 1.01 {
                uncertain += 1;
            }
            if m < rf && v <= t {
                inside += 1;
            }
        }
    }
    let cell = h * h;
    Ok(AreaEstimate {
        estimate: inside as f64 * cell,
        confidence_radius: uncertain as f64 * cell,
        samples: n as u64 * n as u64,
        ambiguous: 0,
        seed: 0,
        method: AreaMethod::GridQuadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use std::f64::consts::PI;

    #[test]
    fn linear_example() {
        let p = IntPolynomial::parse("z").unwrap();
        let a = small_value_area(&p, &int(1), 0.5, 20_000, 7).unwrap();
        assert!((a.estimate - PI / 4.0).abs() <= a.confidence_radius, "{a:?}");
        assert_eq!(a, small_value_area(&p, &int(1), 0.5, 20_000, 7).unwrap());
        assert_ne!(a.estimate, small_value_area(&p, &int(1), 0.5, 20_000, 8).unwrap().estimate);
    }

    #[test]
    fn wilson_radius_at_zero_count_is_positive() {
        let w = wilson_radius(0, 100_000);
        assert!(w > 0.0 && w < 1e-4);
        assert!((wilson_radius(50, 100) - Z99 * 0.05).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = IntPolynomial::parse("z").unwrap();
        assert!(small_value_area(&p, &int(1), 0.0, 5000, 1).is_err());
        assert!(small_value_area(&p, &int(1), 0.5, 10, 1).is_err());
        assert!(small_value_area(&p, &rat(-1, 2), 0.5, 5000, 1).is_err());
    }

    #[test]
    fn grid_matches_disk() {
        let p = IntPolynomial::parse("z^2").unwrap();
        let g = grid_quadrature_area(&p, &int(1), 0.25, 512).unwrap();
        assert!((g.estimate - PI * 0.25).abs() <= g.confidence_radius);
        assert!(g.confidence_radius < 0.1);
    }
}
