//! End-to-end counts: enumerate `S_r(f, T)`, build the auxiliary section,
//! bound the zeros of `s ∘ f` and compare with `ε·T^{1+γ(a+1)}`.

use num_traits::Zero;
use serde::Serialize;

use super::auxiliary::{auxiliary_section_along, member_images, AuxiliarySection, MAX_MONOMIALS};
use super::jensen::{default_r1, jensen_zero_bound, JensenCertificate};
use super::map::AnalyticMap;
use super::points::{enumerate_disk_rational_points, Policy, RationalPointRecord};
use crate::arith::rational::{serde_rational, Rational};
use crate::error::Result;

/// `ε·T^{1+γ(a+1)}`, for `T > 0`.
pub fn counting_bound(t: f64, gamma: f64, a: f64, eps: f64) -> f64 {
    eps * t.powf(1.0 + gamma * (a + 1.0))
}

#[derive(Debug, Clone)]
pub struct CountingOptions {
    /// Jensen circle; `(1 + r)/2` when absent.
    pub r1: Option<Rational>,
    pub max_monomials: usize,
}

impl Default for CountingOptions {
    fn default() -> Self {
        CountingOptions { r1: None, max_monomials: MAX_MONOMIALS }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub t: f64,
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational")]
    pub r1: Rational,
    pub gamma: f64,
    pub a: f64,
    pub eps: f64,
    pub policy: Policy,
    /// Certified members of `S_r(f, T)`.
    pub count: usize,
    /// Parameters flagged inconclusive under the candidate policy.
    pub inconclusive: usize,
    pub bound: f64,
    pub within_bound: bool,
    pub points: Vec<RationalPointRecord>,
    pub auxiliary: Option<AuxiliarySection>,
    /// Every candidate section vanishes identically along `f`.
    pub degenerate: bool,
    /// `s(f(z)) = 0` exactly at every member.
    pub vanishes_on_all: bool,
    pub jensen: Option<JensenCertificate>,
    pub ceiling: Option<u64>,
    /// `deg(s ∘ f)` for polynomial maps.
    pub algebraic_cap: Option<u64>,
    pub compliant: bool,
    pub error: Option<String>,
}

impl CountReport {
    pub fn csv_header() -> &'static str {
        "T,count,bound,ceiling,compliant"
    }

    pub fn csv_row(&self) -> String {
        let ceiling = self.ceiling.map_or(String::new(), |c| c.to_string());
        format!("{},{},{},{},{}", self.t, self.count, self.bound, ceiling, self.compliant)
    }
}

pub fn counting_summary_csv(reports: &[CountReport]) -> String {
    let mut out = String::from(CountReport::csv_header());
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn counting_experiment(
    f: &AnalyticMap,
    r: &Rational,
    t_grid: &[f64],
    gamma: f64,
    a: f64,
    eps0: f64,
) -> Result<Vec<CountReport>> {
    counting_experiment_with(f, r, t_grid, gamma, a, eps0, &CountingOptions::default())
}

/// One report per `T`. Enumeration errors propagate; an infeasible or
/// degenerate auxiliary section is recorded in the cell.
pub fn counting_experiment_with(
    f: &AnalyticMap,
    r: &Rational,
    t_grid: &[f64],
    gamma: f64,
    a: f64,
    eps0: f64,
    opts: &CountingOptions,
) -> Result<Vec<CountReport>> {
    let policy = if f.is_polynomial() { Policy::ExactRational } else { Policy::Candidate };
    let r1 = opts.r1.clone().unwrap_or_else(|| default_r1(r));
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let points = enumerate_disk_rational_points(f, r, t, policy)?;
        let members: Vec<RationalPointRecord> = points.iter().filter(|p| p.is_member()).cloned().collect();
        let count = members.len();
        let inconclusive = points.iter().filter(|p| p.membership == super::points::Membership::Inconclusive).count();
        let bound = counting_bound(t, gamma, a, eps0);
        let mut report = CountReport {
            t,
            r: r.clone(),
            r1: r1.clone(),
            gamma,
            a,
            eps: eps0,
            policy,
            count,
            inconclusive,
            bound,
            within_bound: count as f64 <= bound,
            points,
            auxiliary: None,
            degenerate: false,
            vanishes_on_all: false,
            jensen: None,
            ceiling: None,
            algebraic_cap: None,
            compliant: false,
            error: None,
        };
        let images = member_images(&members)?;
        match auxiliary_section_along(f, &images, t, gamma, eps0, opts.max_monomials) {
            Err(e) => report.error = Some(e.to_string()),
            Ok((aux, degenerate)) => {
                report.degenerate = degenerate;
                report.vanishes_on_all = aux.compliance.vanishes;
                if degenerate {
                    report.error = Some("every admissible section vanishes identically along f".into());
                } else {
                    let g = f.compose(&aux.polynomial)?;
                    if f.is_polynomial() {
                        report.algebraic_cap = g.coeffs.iter().rposition(|c| !c.is_zero()).map(|k| k as u64);
                    }
                    match jensen_zero_bound(&g, r, &r1) {
                        Ok(j) => {
                            report.ceiling = Some(j.bound);
                            report.jensen = Some(j);
                        }
                        Err(e) => report.error = Some(e.to_string()),
                    }
                }
                report.compliant = aux.compliance.compliant && report.ceiling.is_some();
                report.auxiliary = Some(aux);
            }
        }
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn bound_examples() {
        assert_eq!(counting_bound(10.0, 1.0, 0.0, 1.0), 100.0);
        assert!(counting_bound(11.0, 1.5, 1.0, 0.1) > counting_bound(10.0, 1.5, 1.0, 0.1));
    }

    #[test]
    fn parabola_pipeline() {
        let f = AnalyticMap::parse("z, z^2").unwrap();
        let grid = [5f64.ln(), 20f64.ln()];
        let reps = counting_experiment(&f, &rat(9, 10), &grid, 4.0, 1.0, 0.9).unwrap();
        assert_eq!(reps[0].count, 3);
        assert!(reps.windows(2).all(|w| w[0].count <= w[1].count));
        for rep in &reps {
            assert!(rep.vanishes_on_all);
            if rep.compliant {
                assert!(rep.count as u64 <= rep.ceiling.unwrap());
                assert!(rep.count as u64 <= rep.algebraic_cap.unwrap());
            }
        }
        assert!(reps[0].compliant);
        let csv = counting_summary_csv(&reps);
        assert!(csv.starts_with("T,count,bound,ceiling,compliant\n"));
        // T = 0: one point, but the degree budget ε₀·T^{γ/N} is 0
        let reps = counting_experiment(&f, &rat(9, 10), &[0.0], 4.0, 1.0, 0.9).unwrap();
        assert_eq!(reps[0].count, 1);
        assert!(reps[0].error.as_deref().unwrap().contains("infeasible") && !reps[0].compliant);
    }
}
