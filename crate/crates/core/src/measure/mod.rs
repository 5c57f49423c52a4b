//! Measures of small-value sets on complex and p-adic disks.

pub mod area;
pub mod bounds;
pub mod padic;
pub mod replay;

use serde::Serialize;

pub use area::{grid_quadrature_area, small_value_area, AreaEstimate, AreaMethod};
pub use bounds::{area_bound_cor43, interpolation_bound_lemma41, select_beta};
pub use padic::{padic_small_value_measure, PadicMeasure};
pub use replay::{replay_interpolation_argument, ReplayOptions, ReplayRecord};

use crate::arith::rational::Rational;
use crate::error::Result;
use crate::poly::IntPolynomial;

/// One row of a sweep: `(d, H-or-ε, estimate, bound, verdict)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: u32,
    pub param: f64,
    pub estimate: f64,
    pub bound: f64,
    pub verdict: bool,
}

pub fn sweep_csv(param_name: &str, rows: &[SweepRow]) -> String {
    let mut s = format!("d,{param_name},estimate,bound,verdict\n");
    for r in rows {
        s.push_str(&format!(
            "{},{:e},{:e},{:e},{}\n",
            r.d,
            r.param,
            r.estimate,
            r.bound,
            if r.verdict { "pass" } else { "fail" }
        ));
    }
    s
}

/// A sublevel measurement used for calibrating the constant of the area bound.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationSample {
    pub polynomial: String,
    pub d: u32,
    pub eps: f64,
    pub area: AreaEstimate,
    /// `area / (d·ε^{2/d})`.
    pub ratio: f64,
}

pub fn measure_for_calibration(
    p: &IntPolynomial,
    r: &Rational,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<CalibrationSample> {
    let d = p.degree().unwrap_or(0).max(1);
    let area = small_value_area(p, r, eps, samples, seed)?;
    let ratio = area.estimate / area_bound_cor43(d, eps, 1.0);
    Ok(CalibrationSample { polynomial: p.to_string(), d, eps, area, ratio })
}

/// `C = max area/(d·ε^{2/d})` over a training set.
pub fn calibrate_constant(train: &[CalibrationSample]) -> f64 {
    train.iter().map(|s| s.ratio).fold(0.0, f64::max)
}

/// Test rows against `C·d·ε^{2/d}`, allowing the Monte-Carlo radius.
pub fn check_calibration(test: &[CalibrationSample], c: f64) -> Vec<SweepRow> {
    test.iter()
        .map(|s| {
            let bound = area_bound_cor43(s.d, s.eps, c);
            SweepRow {
                d: s.d,
                param: s.eps,
                estimate: s.area.estimate,
                bound,
                verdict: s.area.estimate <= bound + s.area.confidence_radius,
            }
        })
        .collect()
}
