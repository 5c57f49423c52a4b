//! Integer polynomials with exceptionally small values at a fixed point.
//!
//! The coefficient vectors are embedded as
//! `(c, ⌊Λ·Re P(ζ)⌉, ⌊Λ·Im P(ζ)⌉)`, reduced with LLL, and the reduced
//! lattice is enumerated (Fincke–Pohst) inside the ellipsoid that contains
//! every `P` with `‖P‖ ≤ T` beating the current best value. With an
//! unexhausted node budget the result is the true minimum of `|P(ζ)|` over
//! nonvanishing `P` with `‖P‖ ≤ T`; otherwise it is the best vector seen,
//! flagged incomplete.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::lll::{gram_schmidt, lll_reduce, default_delta, IntegerLattice};
use crate::arith::algebraic::{AlgebraicNumber, Precision, DEFAULT_DEGREE_CAP};
use crate::arith::ball::ComplexBall;
use crate::arith::consts::{e_ball, pi_ball};
use crate::arith::dyadic::Dyadic;
use crate::arith::enclosure::Enclosure;
use crate::arith::height::Coord;
use crate::arith::zero::is_exact_zero_with;
use crate::error::{Error, Result};
use crate::poly::enumerate::monomials;
use crate::poly::IntPolynomial;

/// One coordinate of the target point.
#[derive(Debug, Clone)]
pub enum TargetCoord {
    /// A fixed enclosure; treated as real when its imaginary midpoint is 0.
    Ball(ComplexBall),
    Algebraic(AlgebraicNumber),
    Pi,
    E,
}

impl TargetCoord {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "pi" | "π" => Ok(TargetCoord::Pi),
            "e" => Ok(TargetCoord::E),
            t => Ok(TargetCoord::Algebraic(Coord::parse(t)?.to_algebraic())),
        }
    }

    pub fn ball(&self, prec: u32) -> Result<ComplexBall> {
        Ok(match self {
            TargetCoord::Ball(b) => b.clone(),
            TargetCoord::Algebraic(a) => a.refine(prec)?.ball().clone(),
            TargetCoord::Pi => pi_ball(prec),
            TargetCoord::E => e_ball(prec),
        })
    }

    pub fn is_real(&self) -> bool {
        match self {
            TargetCoord::Ball(b) => b.is_real(),
            TargetCoord::Algebraic(a) => a.ball().is_real(),
            _ => true,
        }
    }

    fn refinable(&self) -> bool {
        !matches!(self, TargetCoord::Ball(_))
    }

    /// Exact algebraic value, when there is one.
    pub fn algebraic(&self) -> Option<AlgebraicNumber> {
        match self {
            TargetCoord::Algebraic(a) => Some(a.clone()),
            TargetCoord::Ball(b) if b.is_exact() && b.is_real() => {
                Some(AlgebraicNumber::from_rational(&b.re().to_rational()))
            }
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TargetCoord::Ball(b) => {
                let (re, im) = b.mid_f64();
                format!("ball({re},{im};{:e})", b.rad_f64())
            }
            TargetCoord::Algebraic(a) => a.to_string(),
            TargetCoord::Pi => "pi".into(),
            TargetCoord::E => "e".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirichletOptions {
    pub precision: Precision,
    /// Enumeration nodes before the search is declared incomplete.
    pub node_budget: u64,
}

impl Default for DirichletOptions {
    fn default() -> Self {
        DirichletOptions { precision: Precision::from_env(), node_budget: 2_000_000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallSectionWitness {
    pub target: Vec<String>,
    pub n: usize,
    pub d: u32,
    pub t: u64,
    pub polynomial: IntPolynomial,
    pub norm: String,
    pub log_norm: f64,
    /// Enclosure of `|P(ζ)|`.
    pub value: Enclosure,
    pub log_value: Enclosure,
    /// `−log|P(ζ)| / (d^N·(log⁺‖P‖ + d))`.
    pub exponent: f64,
    /// Box-principle bound on the minimum over `‖P‖ ≤ T`.
    pub pigeonhole_bound: f64,
    pub within_pigeonhole: bool,
    pub lambda_bits: u32,
    pub precision: u32,
    pub search_complete: bool,
    pub nodes: u64,
    /// Candidates skipped because `P(ζ) = 0` exactly.
    pub vanishing_skipped: u64,
    /// Candidates skipped because zero could not be excluded.
    pub possibly_zero_skipped: u64,
}

fn round_scaled(x: &Dyadic, bits: u32) -> BigInt {
    let y = x.mul_pow2(bits as i64);
    let e = y.exponent();
    if e >= 0 {
        y.mantissa() << e as u64
    } else {
        let s = (-e) as u64;
        (y.mantissa() + (BigInt::from(1) << (s - 1))) >> s
    }
}

struct Lattice {
    basis: Vec<Vec<BigInt>>,
    mu: Vec<Vec<f64>>,
    bstar: Vec<f64>,
}

struct Search<'a> {
    lat: &'a Lattice,
    /// Radius² as a function of the best value so far.
    radius_sq: f64,
    x: Vec<i64>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// Visits `x[i..]` with partial squared length `partial`; `free` marks that
    /// all higher coordinates are zero (only `x_i ≥ 0` is then needed).
    fn walk(&mut self, i: usize, partial: f64, free: bool, visit: &mut dyn FnMut(&[i64]) -> Option<f64>) {
        if self.exhausted {
            return;
        }
        let n = self.lat.basis.len();
        let c: f64 = -(i + 1..n).map(|j| self.x[j] as f64 * self.lat.mu[j][i]).sum::<f64>();
        let room = (self.radius_sq - partial).max(0.0) / self.lat.bstar[i];
        let w = room.sqrt() * (1.0 + 1e-9) + 1e-9;
        let lo = if free { 0 } else { (c - w).ceil() as i64 };
        let hi = (c + w).floor() as i64;
        for xi in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return;
            }
            let part = partial + (xi as f64 - c).powi(2) * self.lat.bstar[i];
            if part > self.radius_sq * (1.0 + 1e-9) + 1e-9 {
                continue;
            }
            self.x[i] = xi;
            if i == 0 {
                if !(free && xi == 0) {
                    if let Some(r) = visit(&self.x) {
                        self.radius_sq = self.radius_sq.min(r);
                    }
                }
            } else {
                self.walk(i - 1, part, free && xi == 0, visit);
            }
            self.x[i] = 0;
        }
    }
}

pub fn dirichlet_small_value(zeta: &[TargetCoord], d: u32, t: u64) -> Result<SmallSectionWitness> {
    dirichlet_small_value_with(zeta, d, t, &DirichletOptions::default())
}

const MAX_ROUNDS: usize = 64;

pub(crate) fn monomial_values(balls: &[ComplexBall], mons: &[Vec<u32>], prec: u32) -> Vec<ComplexBall> {
    mons.iter()
        .map(|e| {
            let mut acc = ComplexBall::from_i64(1, prec);
            for (b, &k) in balls.iter().zip(e) {
                if k > 0 {
                    acc = acc.mul(&b.pow(k));
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn ball_enclosure(v: &ComplexBall) -> Enclosure {
    Enclosure::new(v.abs_lower().to_f64_bounds().0, v.abs_upper().to_f64_bounds().1)
}

/// Problem data shared by all rounds.
struct Problem<'a> {
    zeta: &'a [TargetCoord],
    exact: Option<Vec<AlgebraicNumber>>,
    mons: Vec<Vec<u32>>,
    real: bool,
    bound: f64,
    opts: &'a DirichletOptions,
}

struct RoundOutcome {
    best: Option<(IntPolynomial, Enclosure)>,
    nodes: u64,
    exhausted: bool,
    vanishing: u64,
    possibly_zero: u64,
}

pub fn dirichlet_small_value_with(
    zeta: &[TargetCoord],
    d: u32,
    t: u64,
    opts: &DirichletOptions,
) -> Result<SmallSectionWitness> {
    if zeta.is_empty() || t == 0 {
        return Err(Error::InvalidParameter("need N ≥ 1 and T ≥ 1".into()));
    }
    let here = search_degree(zeta, d, t, opts);
    let complete = here.as_ref().is_ok_and(|w| w.search_complete);
    if complete || d == 0 || !matches!(here, Ok(_) | Err(Error::BudgetExceeded { .. })) {
        return here;
    }
    // budget spent: polynomials of lower degree remain admissible
    let mut low = dirichlet_small_value_with(zeta, d - 1, t, opts)?;
    let spent = match &here {
        Ok(w) => w.nodes,
        Err(Error::BudgetExceeded { count, .. }) => *count as u64,
        Err(_) => 0,
    };
    if let Ok(w) = here {
        if w.value.mid() <= low.value.mid() {
            return Ok(w);
        }
    }
    let full = search_degree_pigeon(zeta, d, t)?;
    low.d = d;
    low.search_complete = false;
    low.nodes += spent;
    low.pigeonhole_bound = full;
    low.within_pigeonhole = low.value.lo <= full;
    let denom = (d as f64).powi(zeta.len() as i32) * (low.log_norm.max(0.0) + d as f64);
    low.exponent = -low.log_value.mid() / denom;
    Ok(low)
}

fn search_degree_pigeon(zeta: &[TargetCoord], d: u32, t: u64) -> Result<f64> {
    let mons = monomials(zeta.len(), d);
    let real = zeta.iter().all(|z| z.is_real());
    let start = Precision::default().start;
    let balls: Vec<ComplexBall> = zeta.iter().map(|z| z.ball(start)).collect::<Result<_>>()?;
    let s: f64 = monomial_values(&balls, &mons, start).iter().map(|p| p.abs_upper().to_f64_bounds().1).sum();
    Ok(pigeonhole(s, t as f64, mons.len(), real))
}

/// Box-principle bound for `M` coefficients in `[0, T]` with `Σ|ζ^α| ≤ S`.
fn pigeonhole(s: f64, bound: f64, m: usize, real: bool) -> f64 {
    let count = (bound + 1.0).powi(m as i32) - 1.0;
    if real {
        bound * s / count
    } else {
        std::f64::consts::SQRT_2 * bound * s / count.sqrt().floor().max(1.0)
    }
}

fn search_degree(zeta: &[TargetCoord], d: u32, t: u64, opts: &DirichletOptions) -> Result<SmallSectionWitness> {
    let n_vars = zeta.len();
    let mons = monomials(n_vars, d);
    let m = mons.len();
    let real = zeta.iter().all(|z| z.is_real());
    // coefficient box ‖P‖ ≤ T (inside the ‖P‖ ≤ 2T allowance)
    let bound = t as f64;
    let start = opts.precision.schedule()[0];
    let balls: Vec<ComplexBall> = zeta.iter().map(|z| z.ball(start)).collect::<Result<_>>()?;
    let s: f64 = monomial_values(&balls, &mons, start).iter().map(|p| p.abs_upper().to_f64_bounds().1).sum();
    let pigeon = pigeonhole(s, bound, m, real);
    let prob = Problem { zeta, exact: zeta.iter().map(|z| z.algebraic()).collect(), mons, real, bound, opts };
    // coefficient coordinates carry K = 2^kb so rounding stays below 1/16 of a unit
    let kb = ((8 * m) as f64).log2().ceil() as u32;
    let mut v0 = pigeon * (1.0 + 1e-9);
    let (mut nodes, mut vanishing, mut possibly_zero) = (0u64, 0u64, 0u64);
    for _ in 0..MAX_ROUNDS {
        // Λ·v0 ≈ T·√M: the value coordinate weighs as much as the coefficients
        let lb = (bound * (m as f64).sqrt() / v0).log2().ceil().max(0.0) as u32;
        let sched = opts.precision.schedule();
        let prec = sched.iter().copied().find(|&p| p >= lb + kb + 24).unwrap_or(opts.precision.ceiling);
        let out = run_round(&prob, lb, kb, prec, v0)?;
        nodes += out.nodes;
        vanishing += out.vanishing;
        possibly_zero += out.possibly_zero;
        if let Some((p, value)) = out.best {
            let log_norm = p.log_norm();
            let log_value = Enclosure::new(value.lo.ln(), value.hi.ln());
            let denom = (d.max(1) as f64).powi(n_vars as i32) * (log_norm.max(0.0) + d as f64);
            return Ok(SmallSectionWitness {
                target: zeta.iter().map(|z| z.label()).collect(),
                n: n_vars,
                d,
                t,
                norm: p.norm().to_string(),
                log_norm,
                exponent: if denom > 0.0 { -log_value.mid() / denom } else { f64::NAN },
                within_pigeonhole: value.lo <= pigeon,
                polynomial: p,
                value,
                log_value,
                pigeonhole_bound: pigeon,
                lambda_bits: lb,
                precision: prec,
                search_complete: !out.exhausted,
                nodes,
                vanishing_skipped: out.vanishing,
                possibly_zero_skipped: out.possibly_zero,
            });
        }
        if out.exhausted {
            return Err(Error::BudgetExceeded { count: nodes as f64, budget: opts.node_budget });
        }
        if out.possibly_zero > 0 {
            return Err(Error::PossiblyZero);
        }
        v0 *= 16.0;
    }
    let _ = (vanishing, possibly_zero);
    Err(Error::PossiblyZero)
}

/// Enumerates every `P` with `‖P‖ ≤ T` and `|P(ζ)| ≤ v0`, keeping the least value.
fn run_round(prob: &Problem, lb: u32, kb: u32, prec: u32, v0: f64) -> Result<RoundOutcome> {
    let m = prob.mons.len();
    let bound = prob.bound;
    let balls: Vec<ComplexBall> = prob.zeta.iter().map(|z| z.ball(prec)).collect::<Result<_>>()?;
    let powers = monomial_values(&balls, &prob.mons, prec);
    let scale = lb + kb;
    let max_rad = powers.iter().map(|p| p.rad_f64()).fold(0.0, f64::max);
    let per_coord_err = 0.5 + (scale as f64).exp2() * max_rad * (1.0 + 1e-9);
    let total_err = bound * m as f64 * per_coord_err;
    let k = BigInt::from(1) << kb;
    let basis: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..m).map(|j| if i == j { k.clone() } else { BigInt::zero() }).collect();
            row.push(round_scaled(powers[i].re(), scale));
            if !prob.real {
                row.push(round_scaled(powers[i].im(), scale));
            }
            row
        })
        .collect();
    let reduced = lll_reduce(&IntegerLattice::new(basis)?, &default_delta())?;
    let gs = gram_schmidt(&reduced.basis)?;
    let lat = Lattice {
        mu: gs.mu.iter().map(|r| r.iter().map(|q| q.to_f64().unwrap_or(0.0)).collect()).collect(),
        bstar: gs.b_star.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY)).collect(),
        basis: reduced.basis,
    };
    let cols = if prob.real { 1.0 } else { 2.0 };
    let kf = (kb as f64).exp2();
    let lk = (scale as f64).exp2();
    let radius_for = |v: f64| {
        let w = lk * v + total_err;
        m as f64 * (bound * kf).powi(2) + cols * w * w
    };
    let mut best: Option<(IntPolynomial, Enclosure)> = None;
    let (mut vanishing, mut pz) = (0u64, 0u64);
    let mut err: Option<Error> = None;
    let mut visit = |x: &[i64]| -> Option<f64> {
        let mut c = vec![BigInt::zero(); m];
        let mut w = vec![BigInt::zero(); lat.basis[0].len() - m];
        for (row, &xk) in lat.basis.iter().zip(x) {
            if xk == 0 {
                continue;
            }
            for j in 0..m {
                c[j] += &row[j] * xk;
            }
            for j in 0..w.len() {
                w[j] += &row[m + j] * xk;
            }
        }
        let c: Vec<BigInt> = c.into_iter().map(|v| v >> kb).collect();
        if c.iter().any(|v| v.abs().to_f64().unwrap_or(f64::INFINITY) > bound) {
            return None;
        }
        let approx = w.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum::<f64>().sqrt();
        let lower = (approx - total_err * (1.0 + 1e-9)).max(0.0) / lk;
        let current = best.as_ref().map_or(v0, |b| b.1.hi);
        if lower > current {
            return None;
        }
        let p = IntPolynomial::new(prob.zeta.len(), prob.mons.iter().cloned().zip(c));
        let v = match p.eval_ball(&balls) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                return None;
            }
        };
        let value = if v.contains_zero() {
            match classify_zero(&p, prob, prec) {
                Ok(Some(e)) => e,
                Ok(None) => {
                    vanishing += 1;
                    return None;
                }
                Err(_) => {
                    pz += 1;
                    return None;
                }
            }
        } else {
            ball_enclosure(&v)
        };
        let better = match &best {
            None => value.lo <= v0,
            Some(b) => value.mid() < b.1.mid(),
        };
        if better {
            let r = radius_for(value.hi);
            best = Some((p, value));
            return Some(r);
        }
        None
    };
    let mut s = Search {
        lat: &lat,
        radius_sq: radius_for(v0),
        x: vec![0; m],
        nodes: 0,
        budget: prob.opts.node_budget,
        exhausted: false,
    };
    s.walk(m - 1, 0.0, true, &mut visit);
    if let Some(e) = err {
        return Err(e);
    }
    if s.exhausted && best.is_none() {
        // budget spent on vanishing vectors: fall back to the reduced basis itself
        for row in &lat.basis {
            let c: Vec<BigInt> = row[..m].iter().map(|v| v >> kb).collect();
            if c.iter().all(|v| v.is_zero()) || c.iter().any(|v| v.abs().to_f64().unwrap_or(f64::INFINITY) > bound) {
                continue;
            }
            let p = IntPolynomial::new(prob.zeta.len(), prob.mons.iter().cloned().zip(c));
            let v = p.eval_ball(&balls)?;
            let value = if v.contains_zero() {
                match classify_zero(&p, prob, prec) {
                    Ok(Some(e)) => e,
                    _ => continue,
                }
            } else {
                ball_enclosure(&v)
            };
            if best.as_ref().is_none_or(|b| value.mid() < b.1.mid()) {
                best = Some((p, value));
            }
        }
    }
    Ok(RoundOutcome { best, nodes: s.nodes, exhausted: s.exhausted, vanishing, possibly_zero: pz })
}

fn classify_zero(p: &IntPolynomial, prob: &Problem, prec: u32) -> Result<Option<Enclosure>> {
    resolve_straddling(p, prob.zeta, &prob.exact, prob.opts.precision, prec)
}

/// For a value ball containing 0 at `prec`: `Ok(None)` for an exact zero,
/// `Ok(Some(value))` once separated from zero at a higher precision, `Err`
/// when neither can be shown.
pub(crate) fn resolve_straddling(
    p: &IntPolynomial,
    zeta: &[TargetCoord],
    exact: &Option<Vec<AlgebraicNumber>>,
    precision: Precision,
    prec: u32,
) -> Result<Option<Enclosure>> {
    if let Some(pts) = exact {
        if is_exact_zero_with(p, pts, precision, DEFAULT_DEGREE_CAP)? {
            return Ok(None);
        }
    }
    if !zeta.iter().all(|z| z.refinable()) {
        return Err(Error::PossiblyZero);
    }
    for bits in precision.schedule().into_iter().filter(|&b| b > prec) {
        let balls: Vec<ComplexBall> = zeta.iter().map(|z| z.ball(bits)).collect::<Result<_>>()?;
        let v = p.eval_ball(&balls)?;
        if !v.contains_zero() {
            return Ok(Some(ball_enclosure(&v)));
        }
    }
    Err(Error::PossiblyZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn sqrt2() -> TargetCoord {
        TargetCoord::Algebraic(AlgebraicNumber::real_root(&int(2), 2).unwrap())
    }

    #[test]
    fn sqrt2_degree_one() {
        let w = dirichlet_small_value(&[sqrt2()], 1, 10).unwrap();
        let c: Vec<i64> = w.polynomial.to_univariate().unwrap().iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(c == vec![-7, 5] || c == vec![7, -5], "{c:?}");
        assert!((w.value.mid() - 0.07106781).abs() < 1e-7);
        assert!(w.search_complete && w.within_pigeonhole);
    }

    #[test]
    fn zero_target_gives_unit_constant() {
        let z = TargetCoord::Ball(ComplexBall::zero(128));
        for d in 1..=3 {
            let w = dirichlet_small_value(&[z.clone()], d, 5).unwrap();
            assert!((w.value.mid() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn larger_degree_never_worse() {
        let a = dirichlet_small_value(&[sqrt2()], 1, 50).unwrap();
        let b = dirichlet_small_value(&[sqrt2()], 2, 50).unwrap();
        assert!(b.value.lo <= a.value.hi);
        assert!(b.vanishing_skipped > 0);
    }

    #[test]
    fn transcendental_targets() {
        let w = dirichlet_small_value(&[TargetCoord::Pi], 3, 100).unwrap();
        assert!(w.search_complete);
        assert!(w.value.hi < w.pigeonhole_bound);
        assert!(w.polynomial.norm() <= BigInt::from(100));
    }

    #[test]
    fn matches_exhaustive_search_at_e() {
        let w = dirichlet_small_value(&[TargetCoord::E], 2, 12).unwrap();
        let e = std::f64::consts::E;
        let mut best = f64::INFINITY;
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                for c in -12i64..=12 {
                    if (a, b, c) != (0, 0, 0) {
                        best = best.min((a as f64 + b as f64 * e + c as f64 * e * e).abs());
                    }
                }
            }
        }
        assert!((w.value.mid() - best).abs() < 1e-9 * best.max(1e-9), "{} vs {best}", w.value.mid());
    }
}
