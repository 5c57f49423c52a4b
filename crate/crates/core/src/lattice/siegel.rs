//! Small integer polynomials vanishing exactly on finite sets of rational points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::lll::{default_delta, integer_left_kernel, lll_reduce, norm_sq, IntegerLattice};
use crate::arith::height::Coord;
use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use crate::poly::enumerate::monomials;
use crate::poly::IntPolynomial;

#[derive(Debug, Clone, Serialize)]
pub struct SiegelReport {
    pub polynomial: IntPolynomial,
    /// Number of monomials `C(N+d, d)`.
    pub m: usize,
    /// Rank of the integer kernel.
    pub n: usize,
    pub log_norm: f64,
    /// `log C` where `C` bounds the height-normalised evaluation rows.
    pub log_c: f64,
    /// `max_p d·h(p)`.
    pub mu_max: f64,
    /// `(m/n)·log(C²) + (m/n − 1)·μ̂_max + 3·log n`.
    pub siegel_bound: f64,
    /// `log‖P‖ ≤ bound + (n−1)/2·log 2`.
    pub within_bound: bool,
}

fn log_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().abs().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log max(D, |D·x_i|)` for the common denominator `D`.
fn point_height(p: &[Rational]) -> f64 {
    let den = p.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let top = p.iter().map(|x| (x.numer() * (&den / x.denom())).abs()).fold(den.clone(), |a, b| a.max(b));
    log_big(&top)
}

/// Evaluation row of one point over `mons`, scaled to coprime integers.
fn integer_row(p: &[Rational], mons: &[Vec<u32>]) -> Vec<BigInt> {
    let vals: Vec<Rational> = mons
        .iter()
        .map(|e| p.iter().zip(e).fold(Rational::one(), |acc, (x, &k)| acc * num_traits::pow(x.clone(), k as usize)))
        .collect();
    let den = vals.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let row: Vec<BigInt> = vals.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        row
    } else {
        row.into_iter().map(|x| x / &g).collect()
    }
}

pub fn siegel_from_coords(points: &[Vec<Coord>], n_vars: usize, d: u32) -> Result<SiegelReport> {
    let pts = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| match c {
                    Coord::Rational(q) => Ok(q.clone()),
                    Coord::Algebraic(a) => Err(Error::NonRationalPoint(a.to_string())),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    siegel_vanishing_polynomial(&pts, n_vars, d)
}

/// Shortest LLL vector of the exact integer kernel of the evaluation map
/// `Z[z]_{≤d} → Q^{points}`.
pub fn siegel_vanishing_polynomial(points: &[Vec<Rational>], n_vars: usize, d: u32) -> Result<SiegelReport> {
    Ok(siegel_select(points, n_vars, d, &|_| true)?.expect("every vector accepted"))
}

/// As [`siegel_vanishing_polynomial`], taking the shortest reduced basis
/// vector that `accept` admits; `None` if it admits none.
pub fn siegel_select(
    points: &[Vec<Rational>],
    n_vars: usize,
    d: u32,
    accept: &dyn Fn(&IntPolynomial) -> bool,
) -> Result<Option<SiegelReport>> {
    if n_vars == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n_vars) {
        return Err(Error::ArityMismatch { expected: n_vars, got: p.len() });
    }
    let mons = monomials(n_vars, d);
    let m = mons.len();
    let rows: Vec<Vec<BigInt>> = points.iter().map(|p| integer_row(p, &mons)).collect();
    // kernel of A·c = 0: left kernel of Aᵀ
    let cols: Vec<Vec<BigInt>> = (0..m).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let kernel = integer_left_kernel(&cols);
    if kernel.is_empty() {
        return Err(Error::NoKernel);
    }
    let n = kernel.len();
    let reduced = lll_reduce(&IntegerLattice::new(kernel)?, &default_delta())?;
    let mut order: Vec<&Vec<BigInt>> = reduced.basis.iter().collect();
    order.sort_by_key(|v| norm_sq(v));
    let Some(poly) = order.into_iter().find_map(|v| {
        let mut v = v.clone();
        if v.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
        let p = IntPolynomial::new(n_vars, mons.iter().cloned().zip(v));
        accept(&p).then_some(p)
    }) else {
        return Ok(None);
    };
    for p in points {
        if !poly.eval_rational(p)?.is_zero() {
            return Err(Error::CertificateViolated("kernel vector does not vanish".into()));
        }
    }
    let heights: Vec<f64> = points.iter().map(|p| point_height(p)).collect();
    let mu_max = heights.iter().map(|h| d as f64 * h).fold(0.0, f64::max);
    let log_c = rows
        .iter()
        .zip(&heights)
        .map(|(r, h)| 0.5 * norm_sq(r).to_f64().map_or(f64::INFINITY, f64::ln) - d as f64 * h)
        .fold(0.0, f64::max);
    let ratio = m as f64 / n as f64;
    let siegel_bound = ratio * 2.0 * log_c + (ratio - 1.0) * mu_max + 3.0 * (n as f64).ln();
    let log_norm = poly.log_norm();
    let slack = (n as f64 - 1.0) / 2.0 * std::f64::consts::LN_2;
    Ok(Some(SiegelReport {
        polynomial: poly,
        m,
        n,
        log_norm,
        log_c,
        mu_max,
        siegel_bound,
        within_bound: log_norm <= siegel_bound + slack + 1e-12,
    }))
}
