//! Exhaustive enumeration of `{P : deg P ≤ d, ‖P‖ ≤ H}`.

use num_bigint::BigInt;

use super::intpoly::IntPolynomial;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Exponent vectors of total degree ≤ d in graded-lex order: by total
/// degree, then lexicographically descending (`z1^2, z1 z2, z2^2`).
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![];
    for total in 0..=d {
        let mut block = vec![];
        compositions(n, total, &mut vec![], &mut block);
        block.sort_by(|a, b| b.cmp(a));
        out.extend(block);
    }
    out
}

fn compositions(n: usize, total: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == n - 1 {
        let used: u32 = cur.iter().sum();
        let mut e = cur.clone();
        e.push(total - used);
        out.push(e);
        return;
    }
    let used: u32 = cur.iter().sum();
    for k in 0..=(total - used) {
        cur.push(k);
        compositions(n, total, cur, out);
        cur.pop();
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// `(2H+1)^M − 1` as a float (may exceed `u64`).
pub fn family_size(n: usize, d: u32, h: u64) -> f64 {
    let m = binomial(n as u64 + d as u64, d as u64);
    ((2 * h + 1) as f64).powf(m as f64) - 1.0
}

/// Stream of every nonzero polynomial in the family, exactly once.
///
/// Item `k` has coefficient tuple equal to the base-`(2H+1)` digits of
/// `k` (most significant digit on the first monomial) shifted by `−H`,
/// so coefficient tuples run lexicographically from `(−H, …, −H)` to
/// `(H, …, H)`. The all-zero tuple is skipped. Index ranges shard the stream.
#[derive(Debug, Clone)]
pub struct PolyEnumerator {
    arity: usize,
    height: i64,
    monomials: Vec<Vec<u32>>,
    next: u64,
    end: u64,
    zero_index: u64,
    digits: Vec<i64>,
}

impl PolyEnumerator {
    pub fn new(n: usize, d: u32, h: u64, budget: u64) -> Result<Self> {
        if n == 0 || h == 0 {
            return Err(Error::InvalidParameter("need N ≥ 1 and H ≥ 1".into()));
        }
        let count = family_size(n, d, h);
        if count > budget as f64 {
            return Err(Error::BudgetExceeded { count, budget });
        }
        let monomials = monomials(n, d);
        let total = count as u64 + 1;
        let base = 2 * h + 1;
        let zero_index = (0..monomials.len()).fold(0u64, |acc, _| acc * base + h);
        Ok(PolyEnumerator {
            arity: n,
            height: h as i64,
            digits: vec![0; monomials.len()],
            monomials,
            next: 0,
            end: total,
            zero_index,
        })
    }

    /// Restricts to raw indices `[start, end)`.
    pub fn shard(mut self, start: u64, end: u64) -> Self {
        self.next = start;
        self.end = end.min(self.end);
        self
    }

    /// Total number of raw indices, including the skipped zero tuple.
    pub fn raw_len(&self) -> u64 {
        self.end
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    /// Coefficient tuple of raw index `k`.
    pub fn coefficients_of(&self, mut k: u64) -> Vec<i64> {
        let base = 2 * self.height as u64 + 1;
        let mut c = vec![0i64; self.monomials.len()];
        for slot in c.iter_mut().rev() {
            *slot = (k % base) as i64 - self.height;
            k /= base;
        }
        c
    }

    pub fn polynomial_of(&self, k: u64) -> IntPolynomial {
        let c = self.coefficients_of(k);
        IntPolynomial::new(self.arity, self.monomials.iter().cloned().zip(c.into_iter().map(BigInt::from)))
    }

    /// Next coefficient tuple with its raw index, without building a polynomial.
    pub fn next_coefficients(&mut self) -> Option<(u64, &[i64])> {
        if self.next == self.zero_index {
            self.next += 1;
        }
        if self.next >= self.end {
            return None;
        }
        let k = self.next;
        self.next += 1;
        self.digits = self.coefficients_of(k);
        Some((k, &self.digits))
    }
}

impl Iterator for PolyEnumerator {
    type Item = IntPolynomial;

    fn next(&mut self) -> Option<IntPolynomial> {
        let (k, _) = self.next_coefficients()?;
        Some(self.polynomial_of(k))
    }
}

/// All nonzero `P` with arity `n`, total degree ≤ `d`, `‖P‖ ≤ h`.
pub fn enumerate_polynomials(n: usize, d: u32, h: u64) -> Result<PolyEnumerator> {
    PolyEnumerator::new(n, d, h, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        let v: Vec<_> = enumerate_polynomials(1, 0, 2).unwrap().collect();
        let consts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(consts, ["-2", "-1", "1", "2"]);
        assert_eq!(enumerate_polynomials(1, 1, 1).unwrap().count(), 8);
        assert_eq!(enumerate_polynomials(2, 1, 1).unwrap().count(), 26);
    }

    #[test]
    fn graded_lex_monomials() {
        assert_eq!(monomials(2, 2), vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 3).len() as u64, binomial(6, 3));
    }

    #[test]
    fn completeness_without_duplicates() {
        for (n, d, h) in [(1, 3, 2), (2, 2, 1), (3, 1, 2)] {
            let all: Vec<IntPolynomial> = enumerate_polynomials(n, d, h).unwrap().collect();
            let expected = family_size(n, d, h) as usize;
            assert_eq!(all.len(), expected);
            let set: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), expected);
            assert!(all.iter().all(|p| !p.is_zero() && p.degree().unwrap() <= d && p.norm() <= BigInt::from(h)));
        }
    }

    #[test]
    fn shards_partition_the_stream() {
        let whole: Vec<_> = enumerate_polynomials(2, 1, 2).unwrap().collect();
        let e = enumerate_polynomials(2, 1, 2).unwrap();
        let n = e.raw_len();
        let mut parts = vec![];
        for (a, b) in [(0, n / 3), (n / 3, 2 * n / 3), (2 * n / 3, n)] {
            parts.extend(e.clone().shard(a, b));
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn budget() {
        let e = PolyEnumerator::new(2, 4, 10, 1000).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { .. }));
    }
}
