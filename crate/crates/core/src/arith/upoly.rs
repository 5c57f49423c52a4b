//! Dense univariate integer polynomials (ascending coefficients) and
//! certified complex root isolation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::ComplexBall;
use super::dyadic::Dyadic;
use super::fastball::F64Ball;
use crate::error::{Error, Result};

pub fn from_i64(c: &[i64]) -> Vec<BigInt> {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive_part(p: &[BigInt]) -> Vec<BigInt> {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return p;
    }
    let mut g = content(&p);
    if p.last().unwrap().is_negative() {
        g = -g;
    }
    p.iter().map(|c| c / &g).collect()
}

pub fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn eval_ball(p: &[BigInt], z: &ComplexBall) -> ComplexBall {
    let mut acc = ComplexBall::zero(z.prec());
    for c in p.iter().rev() {
        acc = acc.mul(z).add(&ComplexBall::from_int(c, z.prec()));
    }
    acc
}

pub fn eval_rational(p: &[BigInt], q: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * q + BigRational::from_integer(c.clone());
    }
    acc
}

pub fn to_f64_coeffs(p: &[BigInt]) -> Vec<f64> {
    p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

fn to_q(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_q(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Remainder of `a` modulo `b` over Q.
pub fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let b = trim_q(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim_q(a.to_vec());
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r.pop();
        r = trim_q(r);
    }
    r
}

/// Whether `b` divides `a` in Q[z].
pub fn divides_q(b: &[BigRational], a: &[BigRational]) -> bool {
    rem_q(a, b).is_empty()
}

/// Exact quotient `f / g` in Z[z] when `g` divides `f` there.
pub fn div_exact_z(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = trim(g.to_vec());
    let mut r = trim(f.to_vec());
    if g.is_empty() {
        return None;
    }
    if r.is_empty() {
        return Some(vec![]);
    }
    if r.len() < g.len() {
        return None;
    }
    let lg = g.last().unwrap().clone();
    let mut q = vec![BigInt::zero(); r.len() - g.len() + 1];
    while !r.is_empty() && r.len() >= g.len() {
        let shift = r.len() - g.len();
        let (f, rem) = r.last().unwrap().div_rem(&lg);
        if !rem.is_zero() {
            return None;
        }
        for (i, c) in g.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    if r.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

/// Primitive gcd in Z[z] (computed over Q).
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = trim_q(to_q(a));
    let mut y = trim_q(to_q(b));
    while !y.is_empty() {
        let r = rem_q(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        return vec![];
    }
    let lcm_den = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = x.iter().map(|c| (c * BigRational::from_integer(lcm_den.clone())).to_integer()).collect();
    primitive_part(&ints)
}

pub fn is_squarefree(p: &[BigInt]) -> bool {
    degree(&gcd(p, &derivative(p))) == Some(0)
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut xn1 = vec![BigInt::zero(); n as usize + 1];
    xn1[0] = BigInt::from(-1);
    xn1[n as usize] = BigInt::one();
    let mut p = xn1;
    for d in 1..n {
        if n % d == 0 {
            p = div_exact_z(&p, &cyclotomic(d)).expect("cyclotomic divisibility");
        }
    }
    p
}

/// `n` with `p = Φ_n`, if any.
pub fn cyclotomic_index(p: &[BigInt]) -> Option<u32> {
    let d = degree(p)?;
    // φ(n) ≥ sqrt(n/2), so n ≤ 2 d²
    (1..=(2 * d * d + 2) as u32).find(|&n| cyclotomic(n) == p)
}

/// Approximate roots by Aberth iteration in `f64`.
pub fn approx_roots(p: &[BigInt]) -> Vec<Complex64> {
    let n = degree(p).unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    let lc = p[n].to_f64().unwrap();
    let a: Vec<f64> = p.iter().take(n + 1).map(|c| c.to_f64().unwrap() / lc).collect();
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        radius = radius.max(a[n - k].abs().powf(1.0 / k as f64));
    }
    let radius = radius.max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    aberth_f64(&a, &mut z, 2000);
    z
}

fn aberth_f64(a: &[f64], z: &mut [Complex64], iters: usize) {
    let n = z.len();
    for _ in 0..iters {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (pv, dv) = horner_with_derivative(a, z[k]);
            if pv == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
}

fn horner_with_derivative(a: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        d = d * z + p;
        p = p * z + c;
    }
    (p, d)
}

fn ball_mid(b: &ComplexBall) -> ComplexBall {
    ComplexBall::exact(b.re().clone(), b.im().clone(), b.prec())
}

fn newton_polish(p: &[BigInt], dp: &[BigInt], z: ComplexBall, prec: u32) -> ComplexBall {
    let mut z = ball_mid(&z.with_prec(prec));
    for _ in 0..80 {
        let v = eval_ball(p, &z);
        let d = eval_ball(dp, &z);
        let Some(step) = v.div(&d) else { break };
        let step = ball_mid(&step);
        z = ball_mid(&z.sub(&step));
        let small = step.abs_upper();
        let scale = Dyadic::max(&z.abs_upper(), &Dyadic::one());
        if small.is_zero() || small <= (&scale * &Dyadic::pow2(-(prec as i64) + 6)) {
            break;
        }
    }
    z
}

fn aberth_mp(p: &[BigInt], dp: &[BigInt], z: &mut [ComplexBall], prec: u32, iters: usize) {
    let n = z.len();
    let one = ComplexBall::from_i64(1, prec);
    for _ in 0..iters {
        for k in 0..n {
            let v = eval_ball(p, &z[k]);
            let d = eval_ball(dp, &z[k]);
            let Some(ratio) = v.div(&d) else { continue };
            let mut s = ComplexBall::zero(prec);
            for j in 0..n {
                if j != k {
                    if let Some(t) = z[k].sub(&z[j]).inv() {
                        s = s.add(&ball_mid(&t));
                    }
                }
            }
            if let Some(w) = ratio.div(&one.sub(&ratio.mul(&s))) {
                z[k] = ball_mid(&z[k].sub(&ball_mid(&w)));
            }
        }
    }
}

/// Certifies disks around approximate roots via Weierstrass corrections:
/// all roots lie in the union of `D(z_i, n|W_i|)`, and pairwise disjoint
/// disks contain exactly one root each.
fn certify(p: &[BigInt], z: &[ComplexBall]) -> Option<Vec<ComplexBall>> {
    let n = z.len();
    let lc = p.last().unwrap();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = ComplexBall::from_int(lc, z[i].prec());
        for j in 0..n {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]));
            }
        }
        let w = eval_ball(p, &z[i]).div(&den)?;
        let rho = &w.abs_upper() * &Dyadic::from_i64(n as i64);
        out.push(ComplexBall::new(z[i].re().clone(), z[i].im().clone(), rho, z[i].prec()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if out[i].overlaps(&out[j]) {
                return None;
            }
        }
    }
    Some(out)
}

/// Certified isolating balls for every complex root of a squarefree `p`,
/// with midpoints accurate to roughly `prec` bits.
pub fn isolate_roots(p: &[BigInt], prec: u32, ceiling: u32) -> Result<Vec<ComplexBall>> {
    let p = trim(p.to_vec());
    let n = degree(&p).ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(vec![]);
    }
    let dp = derivative(&p);
    let approx = approx_roots(&p);
    let mut z: Vec<ComplexBall> = approx
        .iter()
        .map(|c| ComplexBall::exact(Dyadic::from_f64(c.re), Dyadic::from_f64(c.im), prec))
        .collect();
    let mut prec = prec.max(64);
    loop {
        let polished: Vec<ComplexBall> = z.iter().map(|zi| newton_polish(&p, &dp, zi.clone(), prec)).collect();
        if let Some(balls) = certify(&p, &polished) {
            return Ok(balls);
        }
        aberth_mp(&p, &dp, &mut z, prec, 60);
        if let Some(balls) = certify(&p, &z) {
            return Ok(balls);
        }
        if prec >= ceiling {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        prec = (prec * 2).min(ceiling);
        z = z.iter().map(|b| b.with_prec(prec)).collect();
    }
}

/// Searches subsets `S` of roots such that `lc · Π_{i∈S} (x − r_i)` has
/// integer coefficients (as far as the balls can tell), smallest subsets
/// first, and hands each candidate's primitive integer polynomial to
/// `accept`. Returns the first accepted subset and polynomial.
pub fn find_integral_factor<F>(
    lc: &BigInt,
    roots: &[F64Ball],
    containing: Option<usize>,
    max_size: usize,
    mut accept: F,
) -> Option<(Vec<usize>, Vec<BigInt>)>
where
    F: FnMut(&[BigInt]) -> bool,
{
    let n = roots.len();
    let lcf = lc.to_f64()?;
    let pool: Vec<usize> = (0..n).filter(|&i| Some(i) != containing).collect();
    for size in 1..=max_size.min(n) {
        let free = if containing.is_some() { size - 1 } else { size };
        if free > pool.len() {
            break;
        }
        let mut idx: Vec<usize> = (0..free).collect();
        loop {
            let mut subset: Vec<usize> = containing.into_iter().collect();
            subset.extend(idx.iter().map(|&k| pool[k]));
            if let Some(poly) = integral_product(lcf, roots, &subset) {
                if accept(&poly) {
                    subset.sort_unstable();
                    return Some((subset, poly));
                }
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
    }
    None
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn nearest_integer(b: &F64Ball) -> Option<f64> {
    let r = b.re.round();
    let dr = b.re - r;
    if r.abs() > 2f64.powi(52) || b.rad >= 0.5 {
        return None;
    }
    if dr * dr + b.im * b.im <= b.rad * b.rad * (1.0 + 1e-12) + 1e-300 {
        Some(r)
    } else {
        None
    }
}

fn integral_product(lc: f64, roots: &[F64Ball], subset: &[usize]) -> Option<Vec<BigInt>> {
    let mut c0 = F64Ball::real(lc);
    for &i in subset {
        c0 = c0.mul(&roots[i].scale(-1.0));
    }
    nearest_integer(&c0)?;
    let mut coeffs = vec![F64Ball::real(lc)];
    for &i in subset {
        let neg = roots[i].scale(-1.0);
        let mut next = vec![F64Ball::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].add(&c.mul(&neg));
        }
        coeffs = next;
    }
    let ints: Option<Vec<BigInt>> = coeffs.iter().map(|c| nearest_integer(c).map(|r| BigInt::from(r as i64))).collect();
    Some(primitive_part(&ints?))
}

/// Irreducibility over Z for a primitive squarefree polynomial, decided
/// by searching root subsets for an integral factor of degree ≤ n/2.
pub fn is_irreducible(p: &[BigInt], roots: &[ComplexBall]) -> bool {
    let n = degree(p).unwrap_or(0);
    if n <= 1 {
        return n == 1;
    }
    let fr: Vec<F64Ball> = roots.iter().map(|r| r.to_f64_ball()).collect();
    let lc = p[n].clone();
    find_integral_factor(&lc, &fr, None, n / 2, |g| degree(g).unwrap_or(0) >= 1 && div_exact_z(p, g).is_some()).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(cyclotomic(1), from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(3), from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), from_i64(&[1, -1, 1]));
        assert_eq!(degree(&cyclotomic(12)), Some(4));
    }

    #[test]
    fn isolation_finds_all_roots_of_quartic() {
        let p = from_i64(&[-2, 0, 0, 0, 1]);
        let roots = isolate_roots(&p, 128, 1024).unwrap();
        assert_eq!(roots.len(), 4);
        let real_pos = roots.iter().find(|r| r.mid_f64().0 > 1.0).unwrap();
        assert!((real_pos.mid_f64().0 - 2f64.powf(0.25)).abs() < 1e-15);
        assert!(real_pos.rad_f64() < 1e-30);
    }

    #[test]
    fn isolation_handles_close_roots() {
        // (1000 z - 1)(1001 z - 1)
        let p = mul(&from_i64(&[-1, 1000]), &from_i64(&[-1, 1001]));
        let roots = isolate_roots(&p, 128, 1024).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|r| r.contains_rational(&BigRational::new(1.into(), 1000.into()))));
    }

    #[test]
    fn irreducibility_search() {
        let f = from_i64(&[-2, 0, 0, 0, 1]);
        assert!(is_irreducible(&f, &isolate_roots(&f, 128, 1024).unwrap()));
        // z^4 + 4 = (z^2 + 2z + 2)(z^2 - 2z + 2)
        let g = from_i64(&[4, 0, 0, 0, 1]);
        assert!(!is_irreducible(&g, &isolate_roots(&g, 128, 1024).unwrap()));
        // 4z^2 - 1 = (2z - 1)(2z + 1)
        let h = from_i64(&[-1, 0, 4]);
        assert!(!is_irreducible(&h, &isolate_roots(&h, 128, 1024).unwrap()));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = mul(&from_i64(&[-1, 1]), &from_i64(&[2, 1]));
        let b = mul(&from_i64(&[-1, 1]), &from_i64(&[5, 3]));
        assert_eq!(gcd(&a, &b), from_i64(&[-1, 1]));
        assert!(is_squarefree(&a));
        assert!(!is_squarefree(&mul(&a, &from_i64(&[2, 1]))));
    }
}
