//! Analytic maps `f = (f_1, …, f_N)` on the unit disk, each component a
//! rational Taylor polynomial plus a bounded remainder.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::ball::ComplexBall;
use crate::arith::dyadic::Dyadic;
use crate::arith::fastball::F64Ball;
use crate::arith::rational::{format_rational, parse_rational, serde_rational_vec, Rational};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

fn up(x: f64) -> f64 {
    x * (1.0 + 1e-14) + 1e-300
}

/// Bound on the remainder `R(z) = f(z) − Σ_{k<len} c_k z^k` over `|z| ≤ ρ`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailBound {
    Zero,
    /// `R(z) = Σ_{k ≥ start} z^k/k!`.
    Exp { start: usize },
    /// Remainder of `s(p_1 + R_1, …)` after expanding `s(p_1, …)`.
    Composed { s: IntPolynomial, parts: Vec<AnalyticFunction> },
}

impl TailBound {
    pub fn is_zero(&self) -> bool {
        match self {
            TailBound::Zero => true,
            TailBound::Exp { .. } => false,
            TailBound::Composed { parts, .. } => parts.iter().all(|p| p.tail.is_zero()),
        }
    }

    /// `R = O(z^order)`; `None` when `R ≡ 0`.
    pub fn order(&self) -> Option<usize> {
        match self {
            TailBound::Zero => None,
            TailBound::Exp { start } => Some(*start),
            TailBound::Composed { parts, .. } => parts.iter().filter_map(|p| p.tail.order()).min(),
        }
    }

    /// Radius beyond which the bound is not available (exclusive).
    pub fn radius(&self) -> f64 {
        match self {
            TailBound::Zero => f64::INFINITY,
            TailBound::Exp { start } => *start as f64 + 1.0,
            TailBound::Composed { parts, .. } => parts.iter().map(|p| p.tail.radius()).fold(f64::INFINITY, f64::min),
        }
    }

    /// Upper bound for `sup_{|z| ≤ ρ} |R(z)|`, nondecreasing in `ρ`.
    pub fn bound(&self, rho: f64) -> f64 {
        match self {
            TailBound::Zero => 0.0,
            TailBound::Exp { start } => {
                if rho <= 0.0 {
                    return 0.0;
                }
                let n = *start as f64;
                if rho >= n + 1.0 {
                    return f64::INFINITY;
                }
                let mut lead = 1.0f64;
                for k in 1..=*start {
                    lead *= rho / k as f64;
                }
                up(up(lead) / (1.0 - rho / (n + 1.0)))
            }
            TailBound::Composed { s, parts } => {
                if rho <= 0.0 {
                    return 0.0;
                }
                let p: Vec<f64> = parts.iter().map(|f| f.abs_series(rho)).collect();
                let t: Vec<f64> = parts.iter().map(|f| f.tail.bound(rho)).collect();
                let mut acc = 0.0;
                for (e, c) in s.terms() {
                    let mut with = 1.0f64;
                    let mut without = 1.0f64;
                    for (i, &k) in e.iter().enumerate() {
                        with *= up(p[i] + t[i]).powi(k as i32);
                        without *= p[i].powi(k as i32);
                    }
                    // without ≤ with; rounding in `without` only loosens
                    acc += c.abs().to_f64().unwrap_or(f64::INFINITY) * up(up(with) - without * (1.0 - 1e-14));
                }
                up(acc)
            }
        }
    }
}

/// `Σ_{k<len} c_k z^k + R(z)` with rational `c_k` and a bound on `R`.
/// All constructors give real Taylor coefficients, so `f(z̄) = conj f(z)`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticFunction {
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
    pub tail: TailBound,
}

impl AnalyticFunction {
    pub fn polynomial(coeffs: Vec<Rational>) -> Self {
        let mut f = AnalyticFunction { coeffs, tail: TailBound::Zero };
        f.trim();
        f
    }

    /// `exp(z)` truncated after `terms` terms.
    pub fn exp(terms: usize) -> Self {
        let mut fact = BigInt::one();
        let mut coeffs = Vec::with_capacity(terms);
        for k in 0..terms {
            if k > 0 {
                fact *= k;
            }
            coeffs.push(Rational::new(BigInt::one(), fact.clone()));
        }
        AnalyticFunction { coeffs, tail: TailBound::Exp { start: terms } }
    }

    fn trim(&mut self) {
        if self.tail.is_zero() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail.is_zero()
    }

    /// Identically zero, known exactly.
    pub fn is_zero(&self) -> bool {
        self.is_polynomial() && self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest radius at which the remainder bound is usable (exclusive).
    pub fn radius(&self) -> f64 {
        self.tail.radius()
    }

    /// `Σ |c_k| ρ^k`, rounded up.
    pub fn abs_series(&self, rho: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = up(acc * rho + up(c.abs().to_f64().unwrap_or(f64::INFINITY)));
        }
        acc
    }

    /// `Σ k |c_k| ρ^{k−1}`, rounded up.
    pub fn abs_derivative_series(&self, rho: f64) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = up(acc * rho + up(k as f64 * c.abs().to_f64().unwrap_or(f64::INFINITY)));
        }
        acc
    }

    /// Upper bound for `sup_{|z| ≤ ρ} |f|`.
    pub fn sup_bound(&self, rho: f64) -> f64 {
        up(self.abs_series(rho) + self.tail.bound(rho))
    }

    /// Upper bound for `sup_{|z| ≤ ρ} |f'|`; the remainder goes through
    /// Cauchy's estimate on a slightly larger circle.
    pub fn derivative_bound(&self, rho: f64) -> f64 {
        let tail = if self.tail.is_zero() {
            0.0
        } else {
            let outer = self.radius();
            if rho >= outer {
                return f64::INFINITY;
            }
            let rho2 = if outer.is_finite() { rho + (outer - rho) / 2.0 } else { rho + 1.0 };
            up(self.tail.bound(rho2) / ((rho2 - rho) * (1.0 - 1e-14)))
        };
        up(self.abs_derivative_series(rho) + tail)
    }

    /// The truncated part at a rational point, exactly.
    pub fn eval_truncated(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The exact value, when the remainder is known to vanish at `z`.
    pub fn eval_exact(&self, z: &Rational) -> Option<Rational> {
        if self.tail.is_zero() || (z.is_zero() && self.tail.order().is_some_and(|o| o > 0)) {
            Some(self.eval_truncated(z))
        } else {
            None
        }
    }

    pub fn eval_ball(&self, z: &ComplexBall) -> ComplexBall {
        let prec = z.prec();
        let mut acc = ComplexBall::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&ComplexBall::from_rational(c, prec));
        }
        if self.tail.is_zero() {
            return acc;
        }
        let rho = z.abs_upper().to_f64_bounds().1;
        acc.inflate(&Dyadic::from_f64(self.tail.bound(rho)))
    }

    /// Coefficients as `f64` balls for fast evaluation.
    pub fn fast_coeffs(&self) -> Vec<F64Ball> {
        self.coeffs.iter().map(|c| ComplexBall::from_rational(c, 128).to_f64_ball()).collect()
    }
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let TailBound::Exp { start } = self.tail {
            if self.coeffs.len() == start && self.coeffs.first().is_some_and(|c| c.is_one()) {
                return write!(f, "exp(z)");
            }
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = format_rational(&a);
            match (k, a.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{coef}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{coef}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.tail.is_zero() {
            write!(f, " + O(z^{})", self.tail.order().unwrap_or(0))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Polynomial,
    Transcendental,
}

/// `f : Δ → A^N ⊂ P^N`, `z ↦ [1 : f_1(z) : … : f_N(z)]`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticMap {
    pub components: Vec<AnalyticFunction>,
    /// Radius of the disk the map is considered on, at most 1.
    pub validity: f64,
    pub kind: MapKind,
}

pub const EXP_TERMS: usize = 30;

impl AnalyticMap {
    pub fn new(components: Vec<AnalyticFunction>, validity: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("a map needs at least one component".into()));
        }
        if !(validity > 0.0 && validity <= 1.0) {
            return Err(Error::InvalidParameter("validity radius must lie in (0, 1]".into()));
        }
        if components.iter().any(|c| c.radius() <= validity) {
            return Err(Error::InvalidParameter("a remainder bound does not cover the validity disk".into()));
        }
        let kind =
            if components.iter().all(|c| c.is_polynomial()) { MapKind::Polynomial } else { MapKind::Transcendental };
        Ok(AnalyticMap { components, validity, kind })
    }

    pub fn polynomial(components: Vec<Vec<Rational>>) -> Self {
        Self::new(components.into_iter().map(AnalyticFunction::polynomial).collect(), 1.0).unwrap()
    }

    /// Comma-separated components, each `exp(z)` or a polynomial in `z`
    /// with rational coefficients, e.g. `z, z^2 - 1/2*z`.
    pub fn parse(s: &str) -> Result<Self> {
        let comps = s
            .split(',')
            .map(|c| {
                let c = c.trim();
                if c == "exp(z)" || c == "exp" {
                    Ok(AnalyticFunction::exp(EXP_TERMS))
                } else {
                    parse_univariate(c).map(AnalyticFunction::polynomial)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps, 1.0)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn is_polynomial(&self) -> bool {
        self.kind == MapKind::Polynomial
    }

    pub fn eval_exact(&self, z: &Rational) -> Option<Vec<Rational>> {
        self.components.iter().map(|c| c.eval_exact(z)).collect()
    }

    pub fn eval_ball(&self, z: &ComplexBall) -> Vec<ComplexBall> {
        self.components.iter().map(|c| c.eval_ball(z)).collect()
    }

    /// `s ∘ f`; exact when every component is a polynomial.
    pub fn compose(&self, s: &IntPolynomial) -> Result<AnalyticFunction> {
        if s.arity() != self.n() {
            return Err(Error::ArityMismatch { expected: self.n(), got: s.arity() });
        }
        let mut acc: Vec<Rational> = vec![];
        for (e, c) in s.terms() {
            let mut term = vec![Rational::from_integer(c.clone())];
            for (comp, &k) in self.components.iter().zip(e) {
                for _ in 0..k {
                    term = mul(&term, &comp.coeffs);
                }
            }
            if acc.len() < term.len() {
                acc.resize(term.len(), Rational::zero());
            }
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t;
            }
        }
        let tail = if self.is_polynomial() {
            TailBound::Zero
        } else {
            TailBound::Composed { s: s.clone(), parts: self.components.clone() }
        };
        let mut f = AnalyticFunction { coeffs: acc, tail };
        f.trim();
        Ok(f)
    }
}

impl fmt::Display for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Σ c_k z^k` with rational `c_k`, written as `[c][*]z[^k]` terms.
pub fn parse_univariate(s: &str) -> Result<Vec<Rational>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty component".into()));
    }
    let mut terms = vec![];
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        // a sign after '^' or '/' belongs to the number, not a new term
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'^' | b'/' | b'*') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut coeffs: Vec<Rational> = vec![];
    for t in terms {
        let (c, k) = match t.find('z') {
            None => (parse_rational(t)?, 0usize),
            Some(pos) => {
                let pre = t[..pos].trim_end_matches('*');
                let c = match pre {
                    "" | "+" => Rational::one(),
                    "-" => -Rational::one(),
                    p => parse_rational(p)?,
                };
                let post = &t[pos + 1..];
                let k = if post.is_empty() {
                    1
                } else {
                    post.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in '{t}'")))?
                };
                (c, k)
            }
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] += c;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn parse_and_display() {
        let f = AnalyticMap::parse("z, z^2 - 1/2*z + 3").unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.components[1].coeffs, vec![int(3), rat(-1, 2), int(1)]);
        assert_eq!(f.to_string(), "(z, 3 - 1/2*z + z^2)");
        let g = AnalyticMap::parse("z, exp(z)").unwrap();
        assert_eq!(g.kind, MapKind::Transcendental);
        assert_eq!(g.to_string(), "(z, exp(z))");
        assert!(AnalyticMap::parse("z, z^").is_err());
    }

    #[test]
    fn exp_tail_encloses() {
        let e = AnalyticFunction::exp(12);
        let v = e.eval_ball(&ComplexBall::from_rational(&rat(9, 10), 128));
        let (lo, hi) = v.re_bounds();
        assert!(lo.to_f64_bounds().0 <= 0.9f64.exp() && 0.9f64.exp() <= hi.to_f64_bounds().1);
        assert!(v.rad_f64() < 1e-8);
        assert_eq!(e.eval_exact(&int(0)), Some(int(1)));
        assert_eq!(e.eval_exact(&rat(1, 2)), None);
        // monotone in ρ
        let ts: Vec<f64> = (0..10).map(|k| e.tail.bound(k as f64 / 10.0)).collect();
        assert!(ts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn composition() {
        let f = AnalyticMap::parse("z, z^2").unwrap();
        let s = IntPolynomial::parse_with_arity("z2 - z1^2", 2).unwrap();
        assert!(f.compose(&s).unwrap().is_zero());
        let s = IntPolynomial::parse_with_arity("z1 - 4*z1*z2", 2).unwrap();
        assert_eq!(f.compose(&s).unwrap().coeffs, vec![int(0), int(1), int(0), int(-4)]);

        let g = AnalyticMap::parse("z, exp(z)").unwrap();
        let s = IntPolynomial::parse_with_arity("z2 - 1", 2).unwrap();
        let h = g.compose(&s).unwrap();
        assert_eq!(h.tail.order(), Some(EXP_TERMS));
        let x = ComplexBall::from_rational(&rat(1, 2), 128);
        let v = h.eval_ball(&x);
        let want = 0.5f64.exp() - 1.0;
        assert!((v.mid_f64().0 - want).abs() <= v.rad_f64() + 1e-15);
    }
}
