//! Empirical fullness: how often random points of the unit polydisk need a
//! constant larger than `A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::scan::{sa_deficiency_scan_with, ScanOptions};
use crate::arith::ball::ComplexBall;
use crate::error::{Error, Result};
use crate::lattice::dirichlet::TargetCoord;

#[derive(Debug, Clone, Serialize)]
pub struct SurveySample {
    pub point: Vec<(f64, f64)>,
    pub max_a_req: f64,
    pub arithmetically_generic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub n: usize,
    pub a: f64,
    pub d_max: u32,
    pub h_max: u64,
    pub seed: u64,
    pub samples: Vec<SurveySample>,
    /// `(A, fraction of samples with max A_req > A)`, in grid order.
    pub fractions: Vec<(f64, f64)>,
}

fn unit_disk(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let x = 2.0 * rng.gen::<f64>() - 1.0;
        let y = 2.0 * rng.gen::<f64>() - 1.0;
        if x * x + y * y < 1.0 {
            return (x, y);
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn fullness_survey(
    n: usize,
    a: f64,
    a_grid: &[f64],
    sample_count: usize,
    d_max: u32,
    h_max: u64,
    seed: u64,
) -> Result<SurveyReport> {
    fullness_survey_with(n, a, a_grid, sample_count, d_max, h_max, seed, &ScanOptions::default())
}

#[allow(clippy::too_many_arguments)]
pub fn fullness_survey_with(
    n: usize,
    a: f64,
    a_grid: &[f64],
    sample_count: usize,
    d_max: u32,
    h_max: u64,
    seed: u64,
    opts: &ScanOptions,
) -> Result<SurveyReport> {
    if sample_count == 0 {
        return Err(Error::EmptySample);
    }
    if a_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("A grid must be sorted".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(sample_count);
    for _ in 0..sample_count {
        let point: Vec<(f64, f64)> = (0..n).map(|_| unit_disk(&mut rng)).collect();
        let zeta: Vec<TargetCoord> =
            point.iter().map(|&(x, y)| TargetCoord::Ball(ComplexBall::from_f64(x, y, 0.0, 128))).collect();
        let scan = sa_deficiency_scan_with(&zeta, a, d_max, h_max, opts)?;
        samples.push(SurveySample {
            point,
            max_a_req: scan.max_a_req().map_or(0.0, |c| c.a_req),
            arithmetically_generic: scan.arithmetically_generic,
        });
    }
    let fractions = a_grid
        .iter()
        .map(|&big_a| {
            let k = samples.iter().filter(|s| s.max_a_req > big_a).count();
            (big_a, k as f64 / sample_count as f64)
        })
        .collect();
    Ok(SurveyReport { n, a, d_max, h_max, seed, samples, fractions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        assert!(matches!(fullness_survey(1, 2.0, &[1.0], 0, 2, 4, 0), Err(Error::EmptySample)));
        let a = fullness_survey(1, 2.0, &[0.1, 0.5, 1.0], 6, 2, 4, 9).unwrap();
        let b = fullness_survey(1, 2.0, &[0.1, 0.5, 1.0], 6, 2, 4, 9).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.fractions.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}
