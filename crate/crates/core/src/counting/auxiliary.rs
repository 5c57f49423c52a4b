//! A small-degree, small-norm polynomial vanishing on every image point
//! `f(z)`, `z ∈ S_r(f, T)`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::map::AnalyticMap;
use super::points::RationalPointRecord;
use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use crate::lattice::siegel::{siegel_select, siegel_vanishing_polynomial, SiegelReport};
use crate::poly::enumerate::{binomial, monomials};
use crate::poly::IntPolynomial;

/// Largest monomial count tried when raising the degree to avoid a section
/// that vanishes along the whole image.
pub const MAX_MONOMIALS: usize = 300;

#[derive(Debug, Clone, Serialize)]
pub struct ComplianceRecord {
    pub n: usize,
    pub t: f64,
    pub gamma: f64,
    pub eps0: f64,
    pub points: usize,
    pub degree: u32,
    /// `ε₀·T^{γ/N}`.
    pub allowed_degree: f64,
    pub degree_ok: bool,
    pub log_norm: f64,
    /// `ε₀·T^{1+γ/N}`.
    pub norm_budget: f64,
    pub norm_ok: bool,
    /// `N/(N−1)`, the exponent the construction needs `γ` to exceed; absent for `N = 1`.
    pub gamma_auxiliary_min: Option<f64>,
    /// `1/N`, the exponent the counting bound is stated for.
    pub gamma_counting_min: f64,
    pub gamma_ok: bool,
    /// Exact check `s(f(z)) = 0` at every point.
    pub vanishes: bool,
    /// Least `T` for which both inequalities hold with this `d` and `‖s‖`.
    pub threshold_t: f64,
    /// Cardinality window `[ε₂(1−ε₁)B₁T^γ, 2ε₂(1−ε₁)B₁T^γ]` for the subset
    /// the asymptotic argument interpolates on (`ε₁ = 1/10`,
    /// `ε₂ = (ε₀/10)^N/2`, `B₁ = 1/N!`); every point is used here.
    pub subset_window: (f64, f64),
    pub compliant: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxiliarySection {
    pub polynomial: IntPolynomial,
    pub siegel: SiegelReport,
    pub compliance: ComplianceRecord,
}

/// Least `d` with `C(N+d, d) > k`.
pub fn least_degree(n: usize, k: usize) -> u32 {
    let mut d = 0u32;
    while binomial(n as u64 + d as u64, d as u64) <= k as u64 {
        d += 1;
    }
    d
}

fn check_params(t: f64, gamma: f64, eps0: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if !(eps0 > 0.0 && eps0 < 1.0) {
        return Err(Error::InvalidParameter("ε₀ must lie in (0, 1)".into()));
    }
    if !(gamma > 0.0 && gamma.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter("need γ > 0 and T ≥ 0".into()));
    }
    if n >= 2 && gamma <= n as f64 / (n as f64 - 1.0) {
        return Err(Error::InvalidParameter(format!("γ = {gamma} must exceed N/(N−1) = {}", n as f64 / (n as f64 - 1.0))));
    }
    Ok(())
}

fn budget(n: usize, k: usize, t: f64, gamma: f64, eps0: f64) -> Result<(u32, f64)> {
    let d = least_degree(n, k);
    let allowed = eps0 * t.powf(gamma / n as f64);
    if d as f64 > allowed {
        let min_t = (d as f64 / eps0).powf(n as f64 / gamma);
        return Err(Error::DegreeBudgetInfeasible { needed: d, allowed, min_t });
    }
    Ok((d, allowed))
}

fn record(images: &[Vec<Rational>], s: &SiegelReport, d: u32, t: f64, gamma: f64, eps0: f64, n: usize) -> ComplianceRecord {
    let nf = n as f64;
    let allowed_degree = eps0 * t.powf(gamma / nf);
    let norm_budget = eps0 * t.powf(1.0 + gamma / nf);
    let vanishes = images.iter().all(|p| s.polynomial.eval_rational(p).is_ok_and(|v| v.is_zero()));
    let gamma_auxiliary_min = (n >= 2).then(|| nf / (nf - 1.0));
    let gamma_ok = gamma_auxiliary_min.is_some_and(|g| gamma > g);
    let degree_ok = d as f64 <= allowed_degree;
    let norm_ok = s.log_norm <= norm_budget;
    let threshold_t =
        (d as f64 / eps0).powf(nf / gamma).max((s.log_norm.max(0.0) / eps0).powf(1.0 / (1.0 + gamma / nf)));
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    let eps2 = (eps0 / 10.0).powi(n as i32) / 2.0;
    let lo = eps2 * 0.9 / n_fact * t.powf(gamma);
    ComplianceRecord {
        n,
        t,
        gamma,
        eps0,
        points: images.len(),
        degree: d,
        allowed_degree,
        degree_ok,
        log_norm: s.log_norm,
        norm_budget,
        norm_ok,
        gamma_auxiliary_min,
        gamma_counting_min: 1.0 / nf,
        gamma_ok,
        vanishes,
        threshold_t,
        subset_window: (lo, 2.0 * lo),
        compliant: degree_ok && norm_ok && gamma_ok && vanishes,
    }
}

pub fn auxiliary_vanishing_section(
    points: &[RationalPointRecord],
    t: f64,
    gamma: f64,
    eps0: f64,
    n: usize,
) -> Result<AuxiliarySection> {
    let images = member_images(points)?;
    auxiliary_section_for_images(&images, t, gamma, eps0, n)
}

/// Images of certified members; anything else is refused.
pub fn member_images(points: &[RationalPointRecord]) -> Result<Vec<Vec<Rational>>> {
    points
        .iter()
        .map(|p| {
            p.affine_image()
                .filter(|_| p.is_member())
                .ok_or_else(|| Error::InvalidParameter(format!("parameter {} is not a certified member", p.z)))
        })
        .collect()
}

/// Least admissible degree, shortest reduced kernel vector.
pub fn auxiliary_section_for_images(
    images: &[Vec<Rational>],
    t: f64,
    gamma: f64,
    eps0: f64,
    n: usize,
) -> Result<AuxiliarySection> {
    check_params(t, gamma, eps0, n)?;
    let (d, _) = budget(n, images.len(), t, gamma, eps0)?;
    let s = siegel_vanishing_polynomial(images, n, d)?;
    let compliance = record(images, &s, d, t, gamma, eps0, n);
    Ok(AuxiliarySection { polynomial: s.polynomial.clone(), siegel: s, compliance })
}

/// Does `s ∘ f` have a certified nonzero Taylor coefficient?
pub fn nonvanishing_along(f: &AnalyticMap, s: &IntPolynomial) -> bool {
    let Ok(g) = f.compose(s) else { return false };
    let order = g.tail.order().unwrap_or(usize::MAX);
    g.coeffs.iter().take(order).any(|c| !c.is_zero())
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// `q mod P`, unless `P` divides the denominator.
fn reduce(q: &Rational) -> Option<u64> {
    let p = num_bigint::BigInt::from(P);
    let modp = |x: &num_bigint::BigInt| -> u64 {
        let r = ((x % &p) + &p) % &p;
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    let den = modp(q.denom());
    (den != 0).then(|| mulmod(modp(q.numer()), powmod(den, P - 2)))
}

/// Rank over `F_P`; a lower bound for the rank over `Q`.
fn rank_mod_p(mut m: Vec<Vec<u64>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = powmod(m[rank][c], P - 2);
        for i in rank + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let k = mulmod(m[i][c], inv);
            for j in c..cols {
                let v = mulmod(k, m[rank][j]);
                m[i][j] = (m[i][j] + P - v) % P;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether some degree-`d` polynomial vanishes on the images but not along
/// the polynomial map `f`: the evaluation map has smaller rank than
/// `s ↦ s∘f`. Ranks are taken mod a large prime, so this only steers the
/// search; the section found is checked exactly.
fn admits_nonvanishing(f: &AnalyticMap, images: &[Vec<Rational>], d: u32) -> bool {
    let mons = monomials(f.n(), d);
    let Some(pts) = images.iter().map(|p| p.iter().map(reduce).collect::<Option<Vec<u64>>>()).collect::<Option<Vec<_>>>()
    else {
        return true;
    };
    let eval: Vec<Vec<u64>> = pts
        .iter()
        .map(|p| mons.iter().map(|e| p.iter().zip(e).fold(1, |a, (&x, &k)| mulmod(a, powmod(x, k as u64)))).collect())
        .collect();
    let comps: Vec<Vec<Rational>> = mons
        .iter()
        .map(|e| {
            let s = IntPolynomial::new(f.n(), [(e.clone(), num_bigint::BigInt::one())]);
            f.compose(&s).map(|g| g.coeffs).unwrap_or_default()
        })
        .collect();
    let len = comps.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut comp_rows = vec![vec![0u64; mons.len()]; len];
    for (j, c) in comps.iter().enumerate() {
        for (k, q) in c.iter().enumerate() {
            match reduce(q) {
                Some(v) => comp_rows[k][j] = v,
                None => return true,
            }
        }
    }
    rank_mod_p(eval) < rank_mod_p(comp_rows)
}

/// Like [`auxiliary_section_for_images`], but prefers a section with
/// `s ∘ f ≢ 0` so that zeros of `s ∘ f` can be counted. For polynomial `f`
/// the degree is raised (within `ε₀·T^{γ/N}` and `max_monomials`) until one
/// exists. The flag is `true` when every candidate vanishes along `f`; the
/// least-degree section is returned then.
pub fn auxiliary_section_along(
    f: &AnalyticMap,
    images: &[Vec<Rational>],
    t: f64,
    gamma: f64,
    eps0: f64,
    max_monomials: usize,
) -> Result<(AuxiliarySection, bool)> {
    let n = f.n();
    check_params(t, gamma, eps0, n)?;
    let (d0, allowed) = budget(n, images.len(), t, gamma, eps0)?;
    let accept = |p: &IntPolynomial| nonvanishing_along(f, p);
    let mut d = d0;
    while d as f64 <= allowed && binomial(n as u64 + d as u64, d as u64) as usize <= max_monomials.max(1) {
        if !f.is_polynomial() || admits_nonvanishing(f, images, d) {
            if let Some(s) = siegel_select(images, n, d, &accept)? {
                let compliance = record(images, &s, d, t, gamma, eps0, n);
                return Ok((AuxiliarySection { polynomial: s.polynomial.clone(), siegel: s, compliance }, false));
            }
        }
        if !f.is_polynomial() {
            break;
        }
        d += 1;
    }
    let s = siegel_vanishing_polynomial(images, n, d0)?;
    let compliance = record(images, &s, d0, t, gamma, eps0, n);
    Ok((AuxiliarySection { polynomial: s.polynomial.clone(), siegel: s, compliance }, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn parabola_images() -> Vec<Vec<Rational>> {
        vec![vec![int(0), int(0)], vec![rat(1, 2), rat(1, 4)], vec![rat(-1, 2), rat(1, 4)]]
    }

    #[test]
    fn examples() {
        let a = auxiliary_section_for_images(&parabola_images(), 5f64.ln(), 4.0, 0.9, 2).unwrap();
        assert_eq!(a.compliance.degree, 2);
        assert!(a.compliance.vanishes && a.compliance.compliant);
        assert_eq!(a.siegel.log_norm, 0.0);

        let e = auxiliary_section_for_images(&[], 1.0, 4.0, 0.5, 2).unwrap();
        assert_eq!(e.polynomial.to_string(), "1");
        assert!(e.compliance.compliant);

        let pts: Vec<Vec<Rational>> = (1..=20).map(|k| vec![rat(1, k)]).collect();
        match auxiliary_section_for_images(&pts, 2.0, 2.0, 0.5, 1) {
            Err(Error::DegreeBudgetInfeasible { needed, min_t, .. }) => {
                assert_eq!(needed, 20);
                assert!((0.5 * min_t.powf(2.0) - 20.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        assert!(auxiliary_section_for_images(&parabola_images(), 5f64.ln(), 2.0, 0.9, 2).is_err());
    }

    #[test]
    fn section_along_the_curve() {
        let f = AnalyticMap::parse("z, z^2").unwrap();
        let (a, degenerate) = auxiliary_section_along(&f, &parabola_images(), 5f64.ln(), 4.0, 0.9, MAX_MONOMIALS).unwrap();
        assert!(!degenerate);
        assert_eq!(a.compliance.degree, 2);
        assert!(nonvanishing_along(&f, &a.polynomial) && a.compliance.vanishes);
    }
}
