//! Closed-form area bounds and the choice of the interpolation order β.

use crate::error::{Error, Result};

/// `C·d·ε^{2/d}`.
pub fn area_bound_cor43(d: u32, eps: f64, c: f64) -> f64 {
    c * d as f64 * eps.powf(2.0 / d as f64)
}

/// `C₁·β·d·ε^{2/(βd)}`.
pub fn interpolation_bound_lemma41(d: u32, beta: u32, eps: f64, c1: f64) -> f64 {
    let bd = (beta * d) as f64;
    c1 * bd * eps.powf(2.0 / bd)
}

/// Least `β ≥ 1` with `C₀·C₁²·C·α^β ≤ 1/2`.
pub fn select_beta(c0: f64, c1: f64, c: f64, alpha: f64) -> Result<u32> {
    if !(alpha > 0.0 && alpha < 1.0) || !(c0 > 0.0 && c1 > 0.0 && c > 0.0) {
        return Err(Error::InvalidParameter("need 0 < α < 1 and positive constants".into()));
    }
    let k = c0 * c1 * c1 * c;
    // start from the real solution and correct for rounding either way
    let guess = ((0.5 / k).ln() / alpha.ln()).ceil().max(1.0);
    if guess > u32::MAX as f64 / 2.0 {
        return Err(Error::InvalidParameter("β overflows".into()));
    }
    let mut beta = guess as u32;
    let holds = |b: u32| k * alpha.powi(b as i32) <= 0.5 * (1.0 + 1e-12);
    while beta > 1 && holds(beta - 1) {
        beta -= 1;
    }
    while !holds(beta) {
        beta += 1;
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plug_in_values() {
        assert!((area_bound_cor43(1, 1.0, PI) - PI).abs() < 1e-15);
        assert!((area_bound_cor43(4, 1e-4, PI) - PI * 4.0 * 1e-2).abs() < 1e-12);
        assert!((interpolation_bound_lemma41(1, 1, 1.0, PI) - PI).abs() < 1e-15);
        assert!((interpolation_bound_lemma41(2, 3, 1e-6, 1.0) - 6e-2).abs() < 1e-12);
    }

    #[test]
    fn beta_examples() {
        assert_eq!(select_beta(1.0, 1.0, 1.0, 0.5).unwrap(), 1);
        assert_eq!(select_beta(4.0, 1.0, 1.0, 0.5).unwrap(), 3);
        assert!(select_beta(1.0, 1.0, 1.0, 1.0).is_err());
        let mut last = 0;
        for k in 1..50 {
            let b = select_beta(3.0, 1.5, 2.0, 1.0 - 1.0 / (k as f64 + 1.0)).unwrap();
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn lemma_bound_grows_with_beta_for_small_eps() {
        let v: Vec<f64> = (1..=20).map(|b| interpolation_bound_lemma41(3, b, 1e-6, 1.0)).collect();
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }
}
