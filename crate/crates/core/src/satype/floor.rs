//! The floor inequality for specialisations `P_ζ(z) = P(z, ζ₂, …, ζ_N)`:
//! `log‖P_ζ‖_r ≥ −B₁·d^N·log‖P‖ − B₂·d²·log d − B₃·d`.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::ball::ComplexBall;
use crate::arith::enclosure::Enclosure;
use crate::arith::rational::{serde_rational, Rational};
use crate::error::{Error, Result};
use crate::poly::ballpoly::{specialize, BallPolynomial};
use crate::poly::supnorm::{sup_norm_at_radius, DEFAULT_TOL};
use crate::poly::IntPolynomial;

#[derive(Debug, Clone, Serialize)]
pub struct FloorCheck {
    pub polynomial: IntPolynomial,
    #[serde(with = "serde_rational")]
    pub r: Rational,
    /// Power of `z₁` divided out before specialising.
    pub z1_power: u32,
    pub degree: u32,
    pub log_norm: f64,
    /// `‖P_ζ‖_r` of the reduced specialisation.
    pub specialized_norm: Enclosure,
    pub floor: f64,
    pub holds: bool,
}

/// `−B₁·d^N·log‖P‖ − B₂·d²·log d − B₃·d`.
pub fn floor_value(b1: f64, b2: f64, b3: f64, n: usize, d: u32, log_norm: f64) -> f64 {
    let df = d as f64;
    let dl = if d > 1 { df.ln() } else { 0.0 };
    -b1 * df.powi(n as i32) * log_norm - b2 * df * df * dl - b3 * df
}

/// `tail` holds `ζ₂, …, ζ_N`; `P` has arity `N ≥ 2`.
pub fn induction_floor_check(
    tail: &[ComplexBall],
    p: &IntPolynomial,
    r: &Rational,
    b1: f64,
    b2: f64,
    b3: f64,
) -> Result<FloorCheck> {
    if p.arity() < 2 {
        return Err(Error::InvalidParameter("specialisation needs N ≥ 2".into()));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(r > &Rational::zero()) {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    let (full, a) = specialize(p, tail)?;
    // P = z₁^a·Q with z₁ ∤ Q; the proof works with Q
    let reduced = BallPolynomial::new(full.coeffs[a as usize..].to_vec());
    let zero = ComplexBall::zero(reduced.prec());
    let norm = match reduced.degree() {
        Some(0) | None => {
            let c = reduced.coeffs.first().cloned().unwrap_or(zero);
            Enclosure::new(c.abs_lower().to_f64_bounds().0, c.abs_upper().to_f64_bounds().1)
        }
        Some(_) => match sup_norm_at_radius(&reduced, &zero, r, DEFAULT_TOL) {
            Ok(e) => e,
            Err(Error::ZeroPolynomial) => return Err(Error::PossiblyZero),
            Err(e) => return Err(e),
        },
    };
    if norm.lo <= 0.0 {
        return Err(Error::PossiblyZero);
    }
    let d = p.degree().unwrap_or(0);
    let log_norm = p.log_norm();
    let floor = floor_value(b1, b2, b3, p.arity(), d, log_norm);
    Ok(FloorCheck {
        polynomial: p.clone(),
        r: r.clone(),
        z1_power: a,
        degree: d,
        log_norm,
        specialized_norm: norm,
        floor,
        holds: norm.lo.ln() >= floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::consts::pi_ball;
    use crate::arith::rational::rat;

    #[test]
    fn examples() {
        let p = IntPolynomial::parse_with_arity("z2 - 3", 2).unwrap();
        let c = induction_floor_check(&[pi_ball(128)], &p, &rat(1, 2), 1.0, 1.0, 1.0).unwrap();
        assert!((c.specialized_norm.mid() - (std::f64::consts::PI - 3.0)).abs() < 1e-12);
        assert!((c.floor - (-(3f64.ln()) - 1.0)).abs() < 1e-12);
        assert!(c.holds);

        let p = IntPolynomial::parse_with_arity("z1", 2).unwrap();
        let c = induction_floor_check(&[pi_ball(128)], &p, &rat(1, 2), 1.0, 1.0, 1.0).unwrap();
        assert_eq!(c.z1_power, 1);
        assert!((c.specialized_norm.mid() - 1.0).abs() < 1e-15 && c.holds);

        // ‖P‖ = 1, d = 1: floor is −B₃
        let p = IntPolynomial::parse_with_arity("z1 + z2", 2).unwrap();
        let c = induction_floor_check(&[ComplexBall::from_i64(1, 128)], &p, &rat(1, 1), 5.0, 5.0, 0.25).unwrap();
        assert_eq!(c.floor, -0.25);
        assert!(c.specialized_norm.lo >= 1.0 && c.holds);
    }
}
