//! Exact LLL reduction and Hermite normal forms over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::Rational;
use crate::error::{Error, Result};

/// Row basis of a sublattice of `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = basis.first().map_or(0, |b| b.len());
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::InvalidParameter("basis vectors differ in dimension".into()));
        }
        Ok(IntegerLattice { basis })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dimension(&self) -> usize {
        self.basis.first().map_or(0, |b| b.len())
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[BigInt]) -> BigInt {
    dot(a, a)
}

/// Gram–Schmidt data: `mu[i][j]` for `j < i` and squared lengths `b_star[i]`.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    pub mu: Vec<Vec<Rational>>,
    pub b_star: Vec<Rational>,
}

pub fn gram_schmidt(basis: &[Vec<BigInt>]) -> Result<GramSchmidt> {
    let n = basis.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut b_star = vec![Rational::zero(); n];
    // r[i][j] = <b_i, b*_j>
    for i in 0..n {
        for j in 0..=i {
            let mut r = Rational::from_integer(dot(&basis[i], &basis[j]));
            for k in 0..j {
                r -= &mu[j][k] * &mu[i][k] * &b_star[k];
            }
            if j < i {
                mu[i][j] = r / &b_star[j];
            } else {
                if r.is_zero() {
                    return Err(Error::DependentBasis);
                }
                b_star[i] = r;
            }
        }
    }
    Ok(GramSchmidt { mu, b_star })
}

fn round_half(q: &Rational) -> BigInt {
    let two = BigInt::from(2);
    (q.numer() * &two + q.denom()).div_floor(&(q.denom() * &two))
}

/// LLL reduction with Lovász parameter `δ ∈ (1/4, 1)`.
pub fn lll_reduce(lattice: &IntegerLattice, delta: &Rational) -> Result<IntegerLattice> {
    let quarter = Rational::new(1.into(), 4.into());
    if !(delta > &quarter && delta < &Rational::one()) {
        return Err(Error::InvalidParameter("δ must lie in (1/4, 1)".into()));
    }
    let mut b = lattice.basis.clone();
    let n = b.len();
    if n == 0 {
        return Ok(lattice.clone());
    }
    let GramSchmidt { mut mu, b_star: mut bs } = gram_schmidt(&b)?;
    let half = Rational::new(1.into(), 2.into());
    let reduce = |b: &mut Vec<Vec<BigInt>>, mu: &mut Vec<Vec<Rational>>, k: usize, l: usize| {
        if mu[k][l].abs() > half {
            let q = round_half(&mu[k][l]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            let qr = Rational::from_integer(q);
            mu[k][l] -= &qr;
            for i in 0..l {
                let t = &qr * &mu[l][i];
                mu[k][i] -= t;
            }
        }
    };
    let mut k = 1;
    while k < n {
        reduce(&mut b, &mut mu, k, k - 1);
        let m = mu[k][k - 1].clone();
        if bs[k] < (delta - &m * &m) * &bs[k - 1] {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let bnew = &bs[k] + &m * &m * &bs[k - 1];
            mu[k][k - 1] = &m * &bs[k - 1] / &bnew;
            bs[k] = &bs[k - 1] * &bs[k] / &bnew;
            bs[k - 1] = bnew;
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(&mut b, &mut mu, k, l);
            }
            k += 1;
        }
    }
    IntegerLattice::new(b)
}

pub fn default_delta() -> Rational {
    Rational::new(99.into(), 100.into())
}

/// Row-style Hermite normal form of the span of `rows`: nonzero rows in
/// echelon form, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Two generating sets span the same lattice iff their forms agree.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    hnf_with_transform(rows).0
}

/// HNF `H` with a unimodular `U` such that `U·rows = [H; 0]`; also returns
/// the number of nonzero rows.
pub fn hnf_with_transform(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for col in 0..m {
        if r == n {
            break;
        }
        // gcd elimination below row r in this column
        loop {
            let piv = (r..n).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].abs());
            let Some(p) = piv else { break };
            a.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let (ar, ur) = (a[r].clone(), u[r].clone());
                for (x, y) in a[i].iter_mut().zip(&ar) {
                    *x -= &q * y;
                }
                for (x, y) in u[i].iter_mut().zip(&ur) {
                    *x -= &q * y;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            a[r].iter_mut().for_each(|x| *x = -&*x);
            u[r].iter_mut().for_each(|x| *x = -&*x);
        }
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            let (ar, ur) = (a[r].clone(), u[r].clone());
            for (x, y) in a[i].iter_mut().zip(&ar) {
                *x -= &q * y;
            }
            for (x, y) in u[i].iter_mut().zip(&ur) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    let h = a[..r].to_vec();
    (h, u, r)
}

/// Basis of the saturated integer kernel `{x ∈ Z^n : Σ x_i·rows_i = 0}`.
pub fn integer_left_kernel(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (_, u, r) = hnf_with_transform(rows);
    u[r..].to_vec()
}

/// Euclidean length of an integer vector as `f64`.
pub fn length_f64(v: &[BigInt]) -> f64 {
    norm_sq(v).to_f64().unwrap_or(f64::INFINITY).sqrt()
}
