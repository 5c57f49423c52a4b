//! Integer polynomials: enumeration, evaluation, sup norms, interpolation.

pub mod ballpoly;
pub mod enumerate;
pub mod intpoly;
pub mod parse;
pub mod series;
pub mod supnorm;

pub use ballpoly::{lagrange_interpolate, specialize, BallPolynomial};
pub use enumerate::{enumerate_polynomials, PolyEnumerator};
pub use intpoly::IntPolynomial;
pub use series::TruncatedSeries;
pub use supnorm::{bernstein_ratio, sup_norm_int, sup_norm_on_disk, DiskSpec};
