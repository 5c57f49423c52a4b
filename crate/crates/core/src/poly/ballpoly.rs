use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::intpoly::IntPolynomial;
use crate::arith::ball::{BallRepr, ComplexBall, DEFAULT_PREC};
use crate::arith::fastball::F64Ball;
use crate::error::{Error, Result};

/// Univariate polynomial with ball coefficients (ascending order).
#[derive(Debug, Clone)]
pub struct BallPolynomial {
    pub coeffs: Vec<ComplexBall>,
}

impl BallPolynomial {
    pub fn new(coeffs: Vec<ComplexBall>) -> Self {
        BallPolynomial { coeffs }
    }

    pub fn from_int(p: &IntPolynomial, prec: u32) -> Self {
        let c = p.to_univariate().expect("univariate polynomial required");
        BallPolynomial { coeffs: c.iter().map(|x| ComplexBall::from_int(x, prec)).collect() }
    }

    pub fn from_ints(c: &[BigInt], prec: u32) -> Self {
        BallPolynomial { coeffs: c.iter().map(|x| ComplexBall::from_int(x, prec)).collect() }
    }

    /// Index of the last coefficient that is not exactly zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !(c.is_exact() && c.contains_zero()))
    }

    /// Every coefficient ball contains zero.
    pub fn may_be_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.contains_zero())
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(DEFAULT_PREC)
    }

    pub fn eval(&self, z: &ComplexBall) -> ComplexBall {
        let mut acc = ComplexBall::zero(self.prec().max(z.prec()));
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn to_f64_balls(&self) -> Vec<F64Ball> {
        self.coeffs.iter().map(|c| c.to_f64_ball()).collect()
    }

    pub fn mul(&self, o: &BallPolynomial) -> BallPolynomial {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return BallPolynomial::new(vec![]);
        }
        let prec = self.prec().max(o.prec());
        let mut out = vec![ComplexBall::zero(prec); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BallPolynomial::new(out)
    }

    pub fn add(&self, o: &BallPolynomial) -> BallPolynomial {
        let prec = self.prec().max(o.prec());
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = ComplexBall::zero(prec);
        BallPolynomial::new(
            (0..n).map(|k| self.coeffs.get(k).unwrap_or(&z).add(o.coeffs.get(k).unwrap_or(&z))).collect(),
        )
    }

    pub fn sub(&self, o: &BallPolynomial) -> BallPolynomial {
        self.add(&o.scale(&ComplexBall::from_i64(-1, o.prec())))
    }

    pub fn scale(&self, k: &ComplexBall) -> BallPolynomial {
        BallPolynomial::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    /// Coefficientwise containment.
    pub fn contains_poly(&self, o: &BallPolynomial) -> bool {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = ComplexBall::zero(DEFAULT_PREC);
        (0..n).all(|k| self.coeffs.get(k).unwrap_or(&z).contains_ball(o.coeffs.get(k).unwrap_or(&z)))
    }
}

#[derive(Serialize, Deserialize)]
struct BallPolyRepr {
    coeffs: Vec<BallRepr>,
}

impl Serialize for BallPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BallPolyRepr { coeffs: self.coeffs.iter().map(BallRepr::from).collect() }.serialize(s)
    }
}

/// The interpolant through `(x_j, y_j)` built from the Lagrange basis
/// `Q_j(z) = Π_{i≠j}(z − x_i) / Π_{i≠j}(x_j − x_i)`.
pub fn lagrange_interpolate(nodes: &[ComplexBall], values: &[ComplexBall]) -> Result<BallPolynomial> {
    if nodes.len() != values.len() {
        return Err(Error::ArityMismatch { expected: nodes.len(), got: values.len() });
    }
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i].overlaps(&nodes[j]) {
                return Err(Error::NodesNotSeparated(i, j));
            }
        }
    }
    let prec = nodes.iter().chain(values).map(|b| b.prec()).max().unwrap_or(DEFAULT_PREC);
    let mut total = BallPolynomial::new(vec![ComplexBall::zero(prec)]);
    for j in 0..nodes.len() {
        let mut num = BallPolynomial::new(vec![ComplexBall::from_i64(1, prec)]);
        let mut den = ComplexBall::from_i64(1, prec);
        for i in 0..nodes.len() {
            if i == j {
                continue;
            }
            num = num.mul(&BallPolynomial::new(vec![nodes[i].neg(), ComplexBall::from_i64(1, prec)]));
            den = den.mul(&nodes[j].sub(&nodes[i]));
        }
        let w = values[j].div(&den).ok_or(Error::NodesNotSeparated(j, j))?;
        total = total.add(&num.scale(&w));
    }
    Ok(total)
}

/// `P_ζ(z) = P(z, ζ_2, …, ζ_N)` together with the largest `a` such that `z_1^a | P`.
pub fn specialize(p: &IntPolynomial, tail: &[ComplexBall]) -> Result<(BallPolynomial, u32)> {
    if tail.len() + 1 != p.arity() {
        return Err(Error::ArityMismatch { expected: p.arity() - 1, got: tail.len() });
    }
    let prec = tail.iter().map(|b| b.prec()).max().unwrap_or(DEFAULT_PREC);
    Ok((BallPolynomial::new(p.coefficient_balls(tail, prec)), p.z1_valuation()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dyadic::Dyadic;
    use crate::arith::rational::int;

    fn b(x: i64) -> ComplexBall {
        ComplexBall::from_i64(x, 128)
    }

    #[test]
    fn interpolation_examples() {
        let p = lagrange_interpolate(&[b(0), b(1)], &[b(0), b(1)]).unwrap();
        assert!(p.coeffs[0].contains_rational(&int(0)) && p.coeffs[1].contains_rational(&int(1)));
        let q = lagrange_interpolate(&[b(0), b(1), b(2)], &[b(1), b(2), b(5)]).unwrap();
        for (c, v) in q.coeffs.iter().zip([1, 0, 1]) {
            assert!(c.contains_rational(&int(v)));
            assert!(c.rad_f64() < 1e-30);
        }
        assert!(matches!(lagrange_interpolate(&[b(0), b(0)], &[b(1), b(2)]), Err(Error::NodesNotSeparated(0, 1))));
    }

    #[test]
    fn specialization_examples() {
        let p = IntPolynomial::parse("z1 + z2").unwrap();
        let (s, a) = specialize(&p, &[b(2)]).unwrap();
        assert_eq!(a, 0);
        assert!(s.coeffs[0].contains_rational(&int(2)) && s.coeffs[1].contains_rational(&int(1)));
        let p = IntPolynomial::parse_with_arity("z1^2", 2).unwrap();
        let (s, a) = specialize(&p, &[b(5)]).unwrap();
        assert_eq!((a, s.degree()), (2, Some(2)));
        let p = IntPolynomial::parse("z1*z2 - z1").unwrap();
        let t = b(3).inflate(&Dyadic::from_f64(1e-20));
        let (s, a) = specialize(&p, &[t]).unwrap();
        assert_eq!(a, 1);
        assert!(s.coeffs[0].contains_rational(&int(0)) && s.coeffs[1].contains_rational(&int(2)));
        assert!(s.coeffs[1].rad_f64() < 1e-19);
        assert!(specialize(&p, &[]).is_err());
    }

    use proptest::prelude::*;
    use crate::arith::rational::rat;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn interpolant_passes_through_nodes(nodes in proptest::collection::btree_set(-40i64..40, 1..12),
                                            den in 1i64..9,
                                            vals in proptest::collection::vec((-50i64..50, 1i64..20), 12)) {
            let xs: Vec<ComplexBall> = nodes.iter().map(|&n| ComplexBall::from_rational(&rat(n, den), 128)).collect();
            let ys: Vec<_> = vals.iter().take(xs.len()).map(|&(a, b)| rat(a, b)).collect();
            let yb: Vec<ComplexBall> = ys.iter().map(|y| ComplexBall::from_rational(y, 128)).collect();
            let p = lagrange_interpolate(&xs, &yb).unwrap();
            prop_assert!(p.coeffs.len() <= xs.len());
            for (x, y) in xs.iter().zip(&ys) {
                prop_assert!(p.eval(x).contains_rational(y));
            }
        }

        #[test]
        fn specialization_commutes_with_evaluation(coeffs in proptest::collection::vec(-9i64..9, 10),
                                                   z in (-20i64..20, 1i64..20), t in (-20i64..20, 1i64..20)) {
            let mons = crate::poly::enumerate::monomials(2, 3);
            let p = IntPolynomial::new(2, mons.into_iter().zip(coeffs.iter().map(|&c| BigInt::from(c))));
            let zb = ComplexBall::from_rational(&rat(z.0, z.1), 128);
            let tb = ComplexBall::from_rational(&rat(t.0, t.1), 128);
            let direct = p.eval_ball(&[zb.clone(), tb.clone()]).unwrap();
            let (s, _) = specialize(&p, &[tb]).unwrap();
            prop_assert!(direct.overlaps(&s.eval(&zb)));
        }
    }
}
