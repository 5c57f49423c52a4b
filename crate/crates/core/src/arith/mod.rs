//! Exact and certified numerics.

pub mod algebraic;
pub mod ball;
pub mod consts;
pub mod dyadic;
pub mod enclosure;
pub mod fastball;
pub mod height;
pub mod padic;
pub mod rational;
pub mod upoly;
pub mod zero;

pub use algebraic::{AlgebraicNumber, Precision};
pub use ball::ComplexBall;
pub use dyadic::Dyadic;
pub use enclosure::Enclosure;
pub use fastball::F64Ball;
pub use rational::Rational;
pub use height::{weil_height, Coord, ProjectivePoint};
pub use zero::{eval_poly_ball, is_exact_zero};
